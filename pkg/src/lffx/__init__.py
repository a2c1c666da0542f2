"""Learning definite programs from failures, with SLD-based failure explanation."""
