"""qlattice: exact multivariate q-series and visible-point-vector identities."""
