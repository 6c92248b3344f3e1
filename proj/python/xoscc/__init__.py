"""Python access to the xoscc hard-distribution and protocol toolkit."""

import json

from . import _core
from ._core import BudgetExceeded, Error, FamilyInfeasible, InvalidArgument, derive_params

__version__ = _core.__version__

__all__ = [
    "BudgetExceeded",
    "Error",
    "FamilyInfeasible",
    "InvalidArgument",
    "derive_params",
    "experiment",
    "generate_family",
    "run",
    "sample",
    "social_welfare",
    "verify_family",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def generate_family(p, q, t, l, seed=0):
    return json.loads(_core.generate_family(p, q, t, l, seed))


def verify_family(family):
    return json.loads(_core.verify_family(_text(family)))


def sample(r, k, eps=0.5, p=None, seed=0, force_theta=None):
    return json.loads(_core.sample(r, k, eps, p, seed, force_theta))


def social_welfare(instance, oracle="clause-union"):
    return _core.social_welfare(_text(instance), oracle)


def run(protocol, instance, seed=0, eps=0.5, p=None):
    return json.loads(_core.run(protocol, _text(instance), seed, eps, p))


def experiment(name, r=1, k=3, eps=0.5, p=None, trials=100, seed=0, protocol="full-rev"):
    return json.loads(_core.experiment(name, r, k, eps, p, trials, seed, protocol))
