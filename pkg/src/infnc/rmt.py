"""
Monte Carlo estimates of normalized traces for orthogonally invariant ensembles.

Randomness is split into a fixed number of streams spawned from one seed.
Each stream draws its share of samples in fixed-size batches and keeps a
running (count, mean, M2); the streams are merged in index order, so the
result does not depend on how many worker threads run them.

Letters of a word are ``Word`` letters whose generator indexes an
``EnsembleSpec``; letters with the same generator share one sample per
draw and a transposed letter uses the transposed sample.
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .cumulants import distribution_from_cumulants
from .distribution import CumulantTable, Distribution
from .freeness import MarginalFamily, free_product
from .words import Letter, Word

__all__ = [
    "EnsembleSpec",
    "TraceEstimate",
    "FitResult",
    "IBPReport",
    "sample_goe",
    "sample_haar_orthogonal",
    "sample_wishart",
    "mc_expected_trace",
    "mc_expected_traces",
    "infinitesimal_fit",
    "infinitesimal_fits",
    "verify_ibp",
    "limit_distribution",
    "FreenessCheck",
    "verify_asymptotic_freeness",
    "parse_scenario",
    "DEFAULT_STREAMS",
    "BATCH",
]

DEFAULT_STREAMS = 16
BATCH = 32
KINDS = ("goe", "wishart", "haar_conjugated", "deterministic")

MatrixSource = Callable[[int], np.ndarray]


# -- samplers; each accepts an optional leading batch size


def sample_goe(N: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """(G + Gᵗ)/√(2N) with G standard Gaussian."""
    _check_dim(N)
    g = rng.standard_normal(_shape(N, N, size))
    return (g + np.swapaxes(g, -1, -2)) / math.sqrt(2 * N)


def sample_haar_orthogonal(N: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """QR of a Gaussian matrix with the triangular diagonal made positive."""
    _check_dim(N)
    q, r = np.linalg.qr(rng.standard_normal(_shape(N, N, size)))
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1
    return q * signs[..., None, :]


def wishart_columns(N: int, c) -> int:
    return int(round(N / Fraction(c)))


def sample_wishart(N: int, c, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """G Gᵗ / M with G of shape N×M and M = round(N/c)."""
    M = wishart_columns(N, c)
    _check_dim(N)
    if M < 2:
        raise ValueError(f"Wishart needs at least 2 columns, got {M}")
    g = rng.standard_normal(_shape(N, M, size))
    return g @ np.swapaxes(g, -1, -2) / M


def _shape(a: int, b: int, size: int | None) -> tuple[int, ...]:
    return (a, b) if size is None else (size, a, b)


def _check_dim(N: int) -> None:
    if N < 2:
        raise ValueError(f"matrix dimension must be at least 2, got {N}")


# -- ensembles


def diagonal_source(values: Sequence[float]) -> MatrixSource:
    """Diagonal matrix repeating ``values`` cyclically along the diagonal."""
    exact = tuple(Fraction(str(v)) for v in values)
    vals = np.array([float(v) for v in exact])

    def build(N: int) -> np.ndarray:
        return np.diag(np.resize(vals, N))

    build.values = exact
    return build


@dataclasses.dataclass(frozen=True)
class EnsembleSpec:
    """A random matrix model; ``shift`` subtracts ``shift·I`` from each sample."""

    kind: str
    c: Fraction = Fraction(1)
    source: MatrixSource | None = None
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "shift", Fraction(self.shift))
        if self.kind == "wishart" and self.c <= 0:
            raise ValueError("Wishart aspect ratio must be positive")
        if self.kind in ("haar_conjugated", "deterministic") and self.source is None:
            raise ValueError(f"{self.kind} ensembles need a matrix source")

    @classmethod
    def from_json(cls, data: Mapping) -> "EnsembleSpec":
        source = diagonal_source(data["diag"]) if "diag" in data else None
        return cls(kind=data["kind"], c=Fraction(str(data.get("c", 1))), source=source,
                   shift=Fraction(str(data.get("shift", 0))))

    def sample(self, N: int, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "goe":
            x = sample_goe(N, rng, size)
        elif self.kind == "wishart":
            x = sample_wishart(N, self.c, rng, size)
        else:
            d = np.asarray(self.source(N), dtype=float)
            if d.shape != (N, N):
                raise ValueError(f"matrix source returned shape {d.shape}, expected {(N, N)}")
            if self.kind == "deterministic":
                x = np.broadcast_to(d, (size, N, N)).copy()
            else:
                o = sample_haar_orthogonal(N, rng, size)
                x = o @ d @ np.swapaxes(o, -1, -2)
        if self.shift:
            x = x - float(self.shift) * np.eye(N)
        return x


# -- estimation


@dataclasses.dataclass(frozen=True)
class TraceEstimate:
    """Monte Carlo estimate of E[Tr(word)]; ``tr`` fields divide by N."""

    mean: float
    std_error: float
    samples: int
    N: int

    @property
    def tr_mean(self) -> float:
        return self.mean / self.N

    @property
    def tr_std_error(self) -> float:
        return self.std_error / self.N

    def __str__(self) -> str:
        return f"{self.mean:.6g} ± {self.std_error:.2g} (N={self.N}, {self.samples} samples)"


class _Moments:
    """Running count, mean and sum of squared deviations."""

    __slots__ = ("n", "mean", "m2")

    def __init__(self, n: int = 0, mean: float = 0.0, m2: float = 0.0):
        self.n, self.mean, self.m2 = n, mean, m2

    def merge(self, other: "_Moments") -> None:
        if other.n == 0:
            return
        n = self.n + other.n
        d = other.mean - self.mean
        self.mean += d * other.n / n
        self.m2 += other.m2 + d * d * self.n * other.n / n
        self.n = n

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        mean = float(values.mean())
        return cls(len(values), mean, float(((values - mean) ** 2).sum()))

    def estimate(self, N: int) -> TraceEstimate:
        se = math.sqrt(self.m2 / (self.n - 1) / self.n) if self.n > 1 else float("nan")
        return TraceEstimate(self.mean, se, self.n, N)


def _batch_traces(words: Sequence[Word], draws: Mapping[int, np.ndarray], size: int, N: int) -> list[np.ndarray]:
    cache: dict[Word, np.ndarray] = {}

    def product(w: Word) -> np.ndarray:
        if w in cache:
            return cache[w]
        if len(w) == 1:
            x = draws[w[0].gen]
            out = np.swapaxes(x, -1, -2) if w[0].transposed else x
        else:
            h = len(w) // 2
            out = product(w[:h]) @ product(w[h:])
        cache[w] = out
        return out

    out = []
    for w in words:
        if not w:
            out.append(np.full(size, float(N)))
        elif len(w) == 1:
            out.append(np.trace(product(w), axis1=-2, axis2=-1))
        else:
            h = len(w) // 2
            out.append(np.einsum("bij,bji->b", product(w[:h]), product(w[h:])))
    return out


def _stream_counts(samples: int, streams: int) -> list[int]:
    q, r = divmod(samples, streams)
    return [q + (i < r) for i in range(streams)]


def _run_stream(words, ensembles, N, count, seq) -> list[_Moments]:
    rng = np.random.default_rng(seq)
    acc = [_Moments() for _ in words]
    gens = sorted({x.gen for w in words for x in w})
    done = 0
    while done < count:
        size = min(BATCH, count - done)
        draws = {g: ensembles[g].sample(N, rng, size) for g in gens}
        for a, v in zip(acc, _batch_traces(words, draws, size, N)):
            a.merge(_Moments.of(v))
        done += size
    return acc


def _seed_sequence(seed, N: int) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + (N,))
    return np.random.SeedSequence([int(seed), N])


def mc_expected_traces(words: Sequence[Word], ensembles: Mapping[int, EnsembleSpec], N: int, samples: int,
                       seed=0, workers: int = 1, streams: int = DEFAULT_STREAMS) -> list[TraceEstimate]:
    """E[Tr] for several words from shared samples."""
    _check_dim(N)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    words = [Word(w) for w in words]
    missing = {x.gen for w in words for x in w} - set(ensembles)
    if missing:
        raise ValueError(f"letters without an ensemble: {sorted(missing)}")
    seqs = _seed_sequence(seed, N).spawn(streams)
    counts = _stream_counts(samples, streams)
    jobs = [(words, ensembles, N, c, s) for c, s in zip(counts, seqs) if c]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _run_stream(*j), jobs))
    else:
        parts = [_run_stream(*j) for j in jobs]
    totals = [_Moments() for _ in words]
    for part in parts:
        for t, p in zip(totals, part):
            t.merge(p)
    return [t.estimate(N) for t in totals]


def mc_expected_trace(word: Word, ensembles: Mapping[int, EnsembleSpec], N: int, samples: int,
                      seed=0, workers: int = 1, streams: int = DEFAULT_STREAMS) -> TraceEstimate:
    return mc_expected_traces([word], ensembles, N, samples, seed, workers, streams)[0]


@dataclasses.dataclass(frozen=True)
class FitResult:
    """Weighted fit of E[tr] = τ + τ′/N + γ/N²."""

    word: Word
    tau: float
    tau_se: float
    tau_prime: float
    tau_prime_se: float
    estimates: tuple[TraceEstimate, ...]

    def z_prime(self, expected) -> float:
        return (self.tau_prime - float(expected)) / self.tau_prime_se

    def z_tau(self, expected) -> float:
        return (self.tau - float(expected)) / self.tau_se


def _fit(word: Word, estimates: Sequence[TraceEstimate]) -> FitResult:
    ns = np.array([e.N for e in estimates], dtype=float)
    y = np.array([e.tr_mean for e in estimates])
    se = np.array([e.tr_std_error for e in estimates])
    design = np.stack([np.ones_like(ns), 1 / ns, 1 / ns ** 2], axis=1)
    if np.any(se == 0):
        # exact data: plain least squares, zero uncertainty
        coef = np.linalg.lstsq(design, y, rcond=None)[0]
        cov = np.zeros((3, 3))
    else:
        w = design / se[:, None]
        coef = np.linalg.lstsq(w, y / se, rcond=None)[0]
        cov = np.linalg.inv(w.T @ w)
    return FitResult(word, float(coef[0]), float(math.sqrt(cov[0, 0])), float(coef[1]),
                     float(math.sqrt(cov[1, 1])), tuple(estimates))


def infinitesimal_fits(words: Sequence[Word], ensembles: Mapping[int, EnsembleSpec], N_list: Sequence[int],
                       samples: int, seed=0, workers: int = 1, streams: int = DEFAULT_STREAMS) -> list[FitResult]:
    """Fit τ and τ′ for several words; each N uses its own shared samples."""
    if len(set(N_list)) < 3:
        raise ValueError("the 1/N fit needs at least 3 distinct N values")
    per_n = [mc_expected_traces(words, ensembles, N, samples, seed, workers, streams) for N in N_list]
    return [_fit(Word(w), [row[i] for row in per_n]) for i, w in enumerate(words)]


def infinitesimal_fit(word: Word, ensembles: Mapping[int, EnsembleSpec], N_list: Sequence[int], samples: int,
                      seed=0, workers: int = 1, streams: int = DEFAULT_STREAMS) -> FitResult:
    return infinitesimal_fits([word], ensembles, N_list, samples, seed, workers, streams)[0]


# -- integration by parts for Haar orthogonal matrices


@dataclasses.dataclass(frozen=True)
class IBPReport:
    """Paired estimate of LHS − RHS; ``z`` is in units of its standard error."""

    lhs: TraceEstimate
    rhs: TraceEstimate
    difference: TraceEstimate

    @property
    def z(self) -> float:
        d = self.difference
        if d.std_error == 0:
            return 0.0 if d.mean == 0 else math.copysign(math.inf, d.mean)
        return d.mean / d.std_error

    def passed(self, sigmas: float = 3.0) -> bool:
        return abs(self.z) < sigmas


def _prod(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def _tr(x: np.ndarray) -> np.ndarray:
    return np.trace(x, axis1=-2, axis2=-1)


def _tr_abt(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tr(A Bᵗ) = Σ A∘B."""
    return np.einsum("...ij,...ij->...", a, b)


def _ibp_sides(ms: Sequence[np.ndarray], o: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(ms)
    N = ms[0].shape[0]
    ot = np.swapaxes(o, -1, -2)
    f = [o @ m @ ot if i % 2 == 0 else np.broadcast_to(m, o.shape) for i, m in enumerate(ms)]
    lhs = (N - 1) * _tr(_prod(f))
    rhs = np.zeros_like(lhs)
    for k in range(1, n, 2):
        a, b = _prod(f[:k]), _prod(f[k:])
        rhs += -_tr_abt(a, b) + _tr(a) * _tr(b)
    for k in range(3, n, 2):
        a, b = _prod(f[:k - 1]), _prod(f[k - 1:])
        rhs += _tr_abt(a, b) - _tr(a) * _tr(b)
    return lhs, rhs


def verify_ibp(matrices: Sequence[np.ndarray], samples: int, seed=0, transpose: bool = False,
               streams: int = DEFAULT_STREAMS) -> IBPReport:
    """Estimate both sides of the orthogonal integration-by-parts identity.

    Odd positions are conjugated by the Haar sample O (by Oᵗ when
    ``transpose`` is set); both sides use the same samples.
    """
    ms = [np.asarray(m, dtype=float) for m in matrices]
    if not ms or len(ms) % 2:
        raise ValueError("the identity needs an even, nonzero number of matrices")
    N = ms[0].shape[0]
    if any(m.shape != (N, N) for m in ms):
        raise ValueError("matrices must be square and of equal size")
    _check_dim(N)
    acc = [_Moments(), _Moments(), _Moments()]
    seqs = _seed_sequence(seed, N).spawn(streams)
    for count, seq in zip(_stream_counts(samples, streams), seqs):
        rng = np.random.default_rng(seq)
        done = 0
        while done < count:
            size = min(BATCH, count - done)
            o = sample_haar_orthogonal(N, rng, size)
            if transpose:
                o = np.swapaxes(o, -1, -2)
            lhs, rhs = _ibp_sides(ms, o)
            for a, v in zip(acc, (lhs, rhs, lhs - rhs)):
                a.merge(_Moments.of(v))
            done += size
    lhs, rhs, diff = (a.estimate(N) for a in acc)
    return IBPReport(lhs, rhs, diff)


# -- asymptotic freeness


def limit_distribution(spec: EnsembleSpec, degree: int):
    """Limit (τ, τ′) of one ensemble as a one-generator distribution.

    GOE and Wishart have vanishing real infinitesimal cumulants; Haar
    conjugates of a cyclically repeated diagonal have τ′ = 0 whenever the
    pattern length divides N.
    """
    one = Word.parse("1")
    if spec.kind == "goe":
        kappa = {Word([one[0]] * n): Fraction(int(n == 2)) for n in range(1, degree + 1)}
    elif spec.kind == "wishart":
        kappa = {Word([one[0]] * n): spec.c ** (n - 1) for n in range(1, degree + 1)}
    elif spec.kind == "haar_conjugated" and hasattr(spec.source, "values"):
        vals = spec.source.values
        tau = {Word([one[0]] * n): sum((v ** n for v in vals), Fraction(0)) / len(vals) for n in range(1, degree + 1)}
        kappa = None
    else:
        raise ValueError(f"no limit law available for a {spec.kind} ensemble with this source")
    if kappa is not None:
        table = CumulantTable(degree=degree, generators=(1,), symmetric=frozenset({1}), kappa=kappa,
                              kappa_prime={w: Fraction(0) for w in kappa})
        dist = distribution_from_cumulants(table)
        tau, tau_prime = dict(dist.tau), dict(dist.tau_prime)
    else:
        tau_prime = {w: Fraction(0) for w in tau}
    if spec.shift:
        tau, tau_prime = _shifted(tau, spec.shift, degree), _shifted(tau_prime, spec.shift, degree, unit=0)
    return Distribution(degree=degree, generators=(1,), symmetric=frozenset({1}), tau=tau, tau_prime=tau_prime)


def _shifted(moments: Mapping[Word, Fraction], shift: Fraction, degree: int, unit: int = 1) -> dict[Word, Fraction]:
    """Moments of x − shift·1 from those of x; ``unit`` is the value on the empty word."""
    letter = Word.parse("1")[0]
    m = [Fraction(unit)] + [moments[Word([letter] * n)] for n in range(1, degree + 1)]
    return {Word([letter] * n): sum((Fraction(math.comb(n, j)) * m[j] * (-shift) ** (n - j) for j in range(n + 1)),
                                     Fraction(0))
            for n in range(1, degree + 1)}


@dataclasses.dataclass(frozen=True)
class FreenessCheck:
    """A Monte Carlo fit against the free-product prediction for one word."""

    text: str
    fit: FitResult
    tau: Fraction
    tau_prime: Fraction
    expected: Fraction | None
    tolerance: float

    @property
    def z(self) -> float:
        return self.fit.z_prime(self.tau_prime)

    @property
    def passed(self) -> bool:
        agrees = self.expected is None or self.expected == self.tau_prime
        return agrees and abs(self.z) <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "word": self.text,
            "tau_hat": self.fit.tau, "tau_hat_se": self.fit.tau_se,
            "tau_prime_hat": self.fit.tau_prime, "tau_prime_hat_se": self.fit.tau_prime_se,
            "tau_predicted": str(self.tau), "tau_prime_predicted": str(self.tau_prime),
            "expected": None if self.expected is None else str(self.expected),
            "z": self.z, "tolerance": self.tolerance, "passed": self.passed,
        }


def _scenario_word(text: str, index: Mapping[str, int]) -> Word:
    letters = []
    for tok in text.split():
        transposed = tok.endswith("^t")
        name = tok[:-2] if transposed else tok
        if name not in index:
            raise ValueError(f"unknown ensemble label {name!r} in word {text!r}")
        letters.append(Letter(index[name], transposed))
    return Word(letters)


def parse_scenario(data: Mapping) -> tuple[dict[str, EnsembleSpec], list[dict]]:
    """Scenario JSON: ``{"ensembles": {label: spec}, "words": [{"word": "a b a b", ...}]}``."""
    ensembles = {str(k): EnsembleSpec.from_json(v) for k, v in data["ensembles"].items()}
    words = [w if isinstance(w, Mapping) else {"word": w} for w in data["words"]]
    return ensembles, words


def verify_asymptotic_freeness(ensembles: Mapping[str, EnsembleSpec], words: Sequence[Mapping | str],
                               N_list: Sequence[int], samples: int, seed=0, workers: int = 1,
                               tolerance: float = 3.0) -> list[FreenessCheck]:
    """Fit τ′ of mixed words and compare with the free product of the limit laws.

    Each word entry may carry ``"expected"`` (a rational checked against
    the prediction) and ``"tolerance"`` (in standard errors).
    """
    entries = [w if isinstance(w, Mapping) else {"word": w} for w in words]
    labels = list(ensembles)
    index = {lab: i + 1 for i, lab in enumerate(labels)}
    parsed = [_scenario_word(e["word"], index) for e in entries]
    degree = max(len(w) for w in parsed)
    family = MarginalFamily(tuple((lab, limit_distribution(ensembles[lab], degree)) for lab in labels))
    joint = free_product(family, degree)
    specs = {index[lab]: ensembles[lab] for lab in labels}
    fits = infinitesimal_fits(parsed, specs, N_list, samples, seed, workers)
    out = []
    for e, w, fit in zip(entries, parsed, fits):
        expected = e.get("expected")
        out.append(FreenessCheck(
            text=e["word"], fit=fit, tau=joint.tau_of(w), tau_prime=joint.tau_prime_of(w),
            expected=None if expected is None else Fraction(str(expected)),
            tolerance=float(e.get("tolerance", tolerance)),
        ))
    return out
