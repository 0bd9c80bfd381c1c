"""
Markov Checks Module

Seeded sweeps over random reversible chains: the Markov type 2 ratio against
M^2 and the barycentric cotype witness against N = 16 Gamma^2 (2/k) + 1.
"""

from src.checks.base import BaseCheck, CheckReport
from src.markov.chains import random_reversible_chain
from src.markov.cotype import PointConfiguration, cotype_check, cotype_witness, markov_type_ratio


class _ChainCheck(BaseCheck):
    """
    Configurations of 2 to 8 ball samples with a random chain and 1 <= t <= 16.

    The ``n`` and ``t`` parameters fix the configuration size and the horizon.
    """

    def random_instance(self, rng):
        n = int(self.params['n']) if 'n' in self.params else int(rng.integers(2, 9))
        t = int(self.params['t']) if 't' in self.params else int(rng.integers(1, 17))
        config = PointConfiguration(tuple(self.sample(rng, n)), self.center, self.radius)
        return config, random_reversible_chain(rng, n), t


class MarkovTypeCheck(_ChainCheck):
    """Markov type 2 ratio against M^2, with M from the ``M`` parameter (default 1)."""

    name = 'markov-type'
    default_tol = 1e-8

    def evaluate_trial(self, rng, index, fingerprint):
        config, chain, t = self.random_instance(rng)
        ratio = markov_type_ratio(config, chain, t)
        bound = self.param('M', 1.0) ** 2
        extras = {'ratio': ratio.value, 'degenerate': 1.0 if ratio.degenerate else 0.0}
        return CheckReport.from_sides(self.name, ratio.value, bound, self.tol, fingerprint, extras)


class CotypeCheck(_ChainCheck):
    name = 'cotype'
    default_tol = 1e-7

    def evaluate_trial(self, rng, index, fingerprint):
        config, chain, t = self.random_instance(rng)
        witness = cotype_witness(config, chain, t, self.cc)
        return cotype_check(config, chain, t, witness, self.cc, self.tol, fingerprint)
