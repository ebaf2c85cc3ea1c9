"""LARCH(inf) simulation, contrast estimation, sandwich inference and Monte-Carlo benchmarking."""
