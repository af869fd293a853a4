"""Exact and numeric machinery around quantum representations of mapping class groups:
cyclotomic arithmetic, Burau matrices at roots of unity, Hermitian signature
profiles, conformal-block colorings, finite quotients and quasimorphisms."""

__version__ = "0.1.0"
