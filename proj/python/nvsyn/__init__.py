"""Python access to the nvsyn evidence framework.

The compiled module hands back JSON text; this layer decodes it.
"""
import json

from ._nvsyn import NvsynError, generate_powerlaw_sample
from ._nvsyn import Framework as _Framework
from ._nvsyn import fit_powerlaw_json as _fit_json

__all__ = ["Framework", "NvsynError", "error_code", "fit_powerlaw", "generate_powerlaw_sample"]


def error_code(exc):
    """Machine code of an NvsynError, e.g. 'UnknownState'."""
    return str(exc).split(":", 1)[0]


class Framework:
    def __init__(self, handle):
        self._h = handle

    @classmethod
    def build(cls, corpus, dictionary):
        return cls(_Framework.build(str(corpus), str(dictionary)))

    @classmethod
    def load(cls, path):
        return cls(_Framework.load(str(path)))

    @classmethod
    def from_json(cls, document):
        return cls(_Framework.from_json(document))

    def save(self, path):
        self._h.save(str(path))

    def export(self):
        return self._h.export()

    @property
    def hash(self):
        return self._h.hash

    def states(self):
        return json.loads(self._h.states_json())

    def profile(self, state):
        return json.loads(self._h.profile_json(state))

    def pairs(self):
        return json.loads(self._h.pairs_json())

    def infer(self, observed, absent=(), min_tier=""):
        return json.loads(self._h.infer_json(list(observed), list(absent), min_tier))

    def fit_powerlaw(self, replicates=0, seed=1, x_min=0):
        return json.loads(self._h.fit_powerlaw_json(replicates, seed, x_min))

    def request(self, method, target, body=None):
        """Same routes as the HTTP API; returns (status, decoded body)."""
        if body is not None and not isinstance(body, str):
            body = json.dumps(body)
        status, text = self._h.handle(method, target, body or "")
        return status, json.loads(text) if text else None


def fit_powerlaw(values, replicates=0, seed=1, x_min=0):
    return json.loads(_fit_json(list(values), replicates, seed, x_min))
