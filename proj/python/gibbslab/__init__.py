"""Python front end to the gibbslab core.

Structured arguments are plain dicts with the same shape as the matching
section of a CLI run config; results come back as dicts.
"""

import json

from . import _core
from ._core import BudgetExceeded, ConfigError, Error, InvalidArgument, NumericalError

__version__ = _core.__version__

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "Error",
    "InvalidArgument",
    "NumericalError",
    "catalog",
    "d_bl",
    "d_psi",
    "hamiltonian",
    "laplace",
    "minimize",
    "rate_I",
    "rate_J",
    "wasserstein_p",
]


def _text(obj):
    return json.dumps(obj)


def catalog():
    return json.loads(_core.catalog())


def d_bl(mu, nu, method="auto"):
    return _core.d_bl(_text(mu), _text(nu), method)


def d_psi(mu, nu, psi):
    """psi is "norm_power:q" or "one_plus_norm"."""
    return _core.d_psi(_text(mu), _text(nu), psi)


def wasserstein_p(mu, nu, p, method="auto"):
    """Raw optimal transport cost, not its p-th root."""
    return _core.wasserstein_p(_text(mu), _text(nu), float(p), method)


def hamiltonian(points, potential):
    pts = [[float(c) for c in p] if hasattr(p, "__len__") else [float(p)] for p in points]
    return _core.hamiltonian(pts, _text(potential))


def rate_I(mu, potential, reference):
    return json.loads(_core.rate_I(_text(mu), _text(potential), _text(reference)))


def rate_J(mu, potential):
    return json.loads(_core.rate_J(_text(mu), _text(potential)))


def minimize(potential, reference, grid=None, variational=None):
    return json.loads(_core.minimize(_text(potential), _text(reference), _text(grid or {}), _text(variational or {})))


def laplace(potential, reference, functional, schedule):
    return json.loads(_core.laplace(_text(potential), _text(reference), _text(functional), _text(schedule)))
