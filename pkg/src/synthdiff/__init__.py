"""Exact jet calculus over Weil algebras, envelopes of curve families,
group-valued combinatorial forms and connections, and plane wave fronts."""

from .algebra import Polynomial, RewriteSystem, parse_poly, resultant
from .combinat import (AffineConnection, BundleConnection, Distribution, Form, GroupoidConnection,
                       NeighbourSpace, bianchi_check, coboundary0, coboundary1, curvature,
                       distribution_from_form, is_closed, is_involutive, load_model, simplices)
from .envelope import Family, envelope_eliminate, synthetic_characteristic_check, touching_check
from .expr import parse
from .groups import FiniteGroup, FiniteGroupoid, named_group
from .jet import JetPoint, cancel_d, derivative, laplacian, taylor_lift, taylor_poly
from .wavefront import ContactElement, OrientedFront, Sphere, offset_front
from .weil import WeilAlgebra, WeilElement, from_text, monad_check, weil_build, weil_tensor

__version__ = "0.1.0"
