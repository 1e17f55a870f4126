"""Definable constraint satisfaction over the ordered rationals.

Decide CSPs with a finite domain whose variables and constraints are
orbit-finite sets of atom tuples, and produce finite certificates.
"""
from .atoms import ParameterContext, TupleType, enumerate_types, representative, restrict_type, type_of
from .certificates import UnsatCertificate, find_certificate, shrink, verify
from .csp_model import (ConstraintFamily, DefinableInstance, FiniteDomain, GroundInstance, Signature,
                        ground, instance_support, validate)
from .defsets import DefinableSet, Orbit, SetBuilder, orbit_of, orbits, sample
from .dsl import load, parse
from .orbit_solver import DefinableSolution, OrbitCsp, decide, reduce, verify_on_ground

__version__ = "0.1.0"
