"""Exact return-map coefficients, Bautin ideals and limit-cycle certificates
for polynomial perturbations of a planar linear center, plus the
successive-derivatives scheme for small perturbations of the rotation flow."""

__version__ = "0.1.0"
