"""Numerical services: model, noise, simulation, estimation, inference and Monte-Carlo."""