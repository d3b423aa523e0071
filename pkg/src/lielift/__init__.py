"""Exact-arithmetic tools for abelian extensions of Lie algebras.

Decides when a pair of automorphisms of the kernel and quotient of an
abelian extension 0 -> A -> L -> B -> 0 comes from an automorphism of L,
by way of Chevalley-Eilenberg cohomology and an explicit obstruction
class, with a closed-form criterion for free 2-step nilpotent algebras.
"""

from .exactlin import QQ, GF, FieldSpec, Matrix

__all__ = ["QQ", "GF", "FieldSpec", "Matrix"]
__version__ = "0.1.0"
