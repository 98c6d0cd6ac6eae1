"""2-lifts and the randomized near-Ramanujan lift pipeline.

The lift of ``g`` by a signing ``w`` has vertex ``(v, +1)`` labeled ``v`` and
``(v, -1)`` labeled ``v + n``; edge ``e = (u, v)`` becomes lifted edges
``2e`` (from the ``+1`` copy of ``u``) and ``2e + 1`` (from the ``-1`` copy).
Its spectrum is the union of the spectra of ``g`` and of the signed matrix.

The pipeline replaces every derandomized generator with seeded draws and
retry loops; each draw's seed, outcome and measured values go to a
provenance log from which :func:`replay_pipeline` rebuilds the graph.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .cycles import bicycle_free_radius, girth
from .errors import PipelineError
from .fixer import FixParams, fix
from .graph import Graph, graph_hash, is_regular
from .sampler import SamplerConfig, sample_uniform_simple, substream
from .spectral import check_signing, ramanujan_bound, signed_spectral_radius, spectrum_summary

log = logging.getLogger(__name__)


def two_lift(g: Graph, w) -> Graph:
    w = check_signing(g, w)
    n = g.n
    u, v = g.edges[:, 0], g.edges[:, 1]
    flip = (w < 0).astype(np.int64) * n
    plus = np.stack([u, v + flip], axis=1)
    minus = np.stack([u + n, v + n - flip], axis=1)
    edges = np.empty((2 * g.m, 2), dtype=np.int64)
    edges[0::2] = plus
    edges[1::2] = minus
    return Graph(2 * n, edges)


def random_signing(g: Graph, seed: int) -> np.ndarray:
    """Independent fair +-1 per edge id."""
    rng = substream(seed, 0)
    return np.where(rng.random(g.m) < 0.5, -1, 1).astype(np.int8)


def girth_nondecreasing_check(g: Graph, w):
    """Returns ``(holds, girth(g), girth(lift))``."""
    before = girth(g)
    after = girth(two_lift(g, w))
    return after >= before, before, after


# -- pipeline ------------------------------------------------------------------

def max_girth_coefficient(target_n: int, d: int) -> float:
    """Upper limit on c: ``sqrt(log2 n) * log_{d-1}(2) / 15``."""
    return math.sqrt(math.log2(target_n)) * math.log(2, d - 1) / 15


@dataclass(frozen=True)
class LiftPipelineConfig:
    target_n: int
    d: int = 3
    epsilon: float = 0.3
    c: float = 0.2
    seed: int = 0
    max_retries_per_lift: int = 100
    max_base_attempts: int = 200
    # Overrides the fix radius derived from the base size.
    fix_radius: int | None = None

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("d must be >= 3")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.max_retries_per_lift < 1 or self.max_base_attempts < 1:
            raise ValueError("retry budgets must be positive")
        cmax = max_girth_coefficient(self.target_n, self.d)
        if self.c > cmax + 1e-12:
            raise ValueError(f"c={self.c} exceeds sqrt(log n) log_(d-1) 2 / 15 = {cmax:.4f}")

    @property
    def kappa(self) -> float:
        return 15 * self.c / math.log(2, self.d - 1)

    @property
    def base_exponent(self) -> int:
        return math.ceil(self.kappa * math.sqrt(math.log2(self.target_n)))

    @property
    def base_n(self) -> int:
        n0 = 2 ** self.base_exponent
        return n0 + (n0 * self.d) % 2

    @property
    def base_radius(self) -> int:
        """Bicycle-free radius demanded of the base graph: ``ceil(log_{d-1}(n0) / 5)``."""
        return math.ceil(math.log(self.base_n, self.d - 1) / 5 - 1e-9)

    @property
    def girth_target(self) -> float:
        return self.c * math.sqrt(math.log2(self.target_n))

    @property
    def radius(self) -> int:
        """Fix radius: ``(alpha/3) log_{d-1} n0`` with alpha = 3/5, at least the girth target."""
        if self.fix_radius is not None:
            return self.fix_radius
        return max(math.floor(math.log(self.base_n, self.d - 1) / 5 + 1e-9),
                   math.ceil(self.girth_target), 1)


def lift_threshold(m: int, d: int, r: int, epsilon: float) -> tuple[float, float]:
    """Signing acceptance bound and the literal theorem bound at current size ``m``.

    Theorem bound ``2 sqrt(d-1) (1 + (ln ln m)^4 / r^2)``; the bound actually
    used is capped at ``2 sqrt(d-1) + epsilon`` so every accepted lift keeps the
    final graph within the requested lambda.
    """
    loglog = math.log(math.log(m)) if m > math.e else 0.0
    theorem = ramanujan_bound(d) * (1 + loglog**4 / max(r, 1) ** 2)
    return min(theorem, ramanujan_bound(d) + epsilon), theorem


def _base_seed(cfg: LiftPipelineConfig, attempt: int) -> int:
    return int(np.random.SeedSequence([cfg.seed, 1, attempt]).generate_state(1, np.uint64)[0])


def _signing_seed(cfg: LiftPipelineConfig, step: int, attempt: int) -> int:
    return int(np.random.SeedSequence([cfg.seed, 2, step, attempt]).generate_state(1, np.uint64)[0])


def lift_pipeline(cfg: LiftPipelineConfig) -> tuple[Graph, dict]:
    """Sample a base graph, fix its short cycles, then 2-lift up to ``target_n``.

    Returns the final graph and a JSON-ready provenance log.
    """
    d = cfg.d
    Lam0 = ramanujan_bound(d) * (1 + cfg.epsilon)
    prov = {"config": asdict(cfg), "derived": {
        "kappa": cfg.kappa, "base_n": cfg.base_n, "base_radius": cfg.base_radius,
        "fix_radius": cfg.radius, "girth_target": cfg.girth_target,
    }, "base_attempts": [], "lifts": [], "warnings": []}
    # The degree cap involves an unstated constant alpha >= 1; only the
    # alpha = 1 ceiling is checked, and only as a warning.
    if d > math.sqrt(math.log2(cfg.base_n)):
        msg = f"d={d} exceeds sqrt(log2 n0)={math.sqrt(math.log2(cfg.base_n)):.2f}; base-graph guarantees void"
        prov["warnings"].append(msg)
        warnings.warn(msg, stacklevel=2)

    g0 = None
    for attempt in range(cfg.max_base_attempts):
        seed = _base_seed(cfg, attempt)
        cand = sample_uniform_simple(SamplerConfig(cfg.base_n, d, seed))
        bfr = bicycle_free_radius(cand)
        lam = spectrum_summary(cand).lam
        ok = bfr >= cfg.base_radius and lam <= Lam0
        prov["base_attempts"].append({"attempt": attempt, "seed": seed, "bicycle_free_radius": bfr,
                                      "lambda": lam, "accepted": ok})
        if ok:
            g0 = cand
            break
    if g0 is None:
        raise PipelineError("no acceptable base graph", stage="base",
                            measured={"attempts": cfg.max_base_attempts})

    r = cfg.radius
    fixed, plan = fix(g0, FixParams(r, force=True))
    bfr = bicycle_free_radius(fixed)
    lam_fixed = spectrum_summary(fixed).lam
    prov["fix"] = {"r": r, "tau": plan.tau, "h": plan.h, "n_out": fixed.n, "warnings": plan.warnings,
                   "girth": girth(fixed), "bicycle_free_radius": bfr, "lambda": lam_fixed}
    if girth(fixed) < cfg.girth_target:
        raise PipelineError("fixed base graph misses the girth target", stage="fix",
                            measured=prov["fix"])

    g = fixed
    step = 0
    while g.n < cfg.target_n:
        bound, theorem = lift_threshold(g.n, d, bfr, cfg.epsilon)
        tries = []
        accepted = None
        for attempt in range(cfg.max_retries_per_lift):
            seed = _signing_seed(cfg, step, attempt)
            w = random_signing(g, seed)
            rho = signed_spectral_radius(g, w)
            tries.append({"attempt": attempt, "seed": seed, "rho": rho, "accepted": rho <= bound})
            if rho <= bound:
                accepted = w
                break
        prov["lifts"].append({"step": step, "m": g.n, "bound": bound, "theorem_bound": theorem,
                              "radius": bfr, "tries": tries})
        if accepted is None:
            raise PipelineError(f"no signing within {bound:.4f} at lift {step}", stage="lift",
                                measured={"m": g.n, "best_rho": min(t["rho"] for t in tries)})
        g = two_lift(g, accepted)
        step += 1

    summary = spectrum_summary(g)
    prov["result"] = {"n": g.n, "m": g.m, "lambda": summary.lam, "girth": girth(g),
                      "regular": is_regular(g, d), "hash": graph_hash(g)}
    log.info("pipeline: n0=%d -> N=%d, lambda=%.4f", cfg.base_n, g.n, summary.lam)
    return g, prov


def replay_pipeline(prov: dict) -> Graph:
    """Rebuild the pipeline output from the accepted seeds in a provenance log."""
    cfg = LiftPipelineConfig(**prov["config"])
    base = next(a for a in prov["base_attempts"] if a["accepted"])
    g = sample_uniform_simple(SamplerConfig(cfg.base_n, cfg.d, base["seed"]))
    g, _ = fix(g, FixParams(prov["fix"]["r"], force=True))
    for lift in prov["lifts"]:
        seed = next(t["seed"] for t in lift["tries"] if t["accepted"])
        g = two_lift(g, random_signing(g, seed))
    return g
