"""Four-dimensional nilpotent associative algebras over finite fields, realized
as regular subgroups of the affine group AGL_4(F_q)."""

from __future__ import annotations

__version__ = "0.1.0"
