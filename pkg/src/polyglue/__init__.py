"""Exact gluing of spherical polytopes into projective manifolds, with convexity checks."""
from . import kernel
from .complex import GluingSpec, ProjectiveTransform, validate, poincare_check, \
    residual_convexity_check, hypotheses
from .developer import develop, certify_convexity, gallery_trace
from .errors import (ConeLikeCell, ConsistencyError, InputError, NeedsDeeperDevelopment,
                     NotAPolytope, PolyglueError)
from .kernel import Cone
from .polytope import SphericalPolytope, build, dual, is_cone_like, is_thin, is_triangular

__all__ = [
    "kernel", "Cone", "SphericalPolytope", "build", "dual", "is_triangular", "is_cone_like",
    "is_thin", "GluingSpec", "ProjectiveTransform", "validate", "poincare_check",
    "residual_convexity_check", "hypotheses", "develop", "certify_convexity",
    "gallery_trace", "PolyglueError", "InputError", "NotAPolytope",
    "NeedsDeeperDevelopment", "ConeLikeCell", "ConsistencyError",
]
