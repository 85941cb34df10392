"""Monte Carlo estimation of reading, detection and false-positive rates.

Every trial draws from its own stream ``trial_rng(seed, index)``, so a run is
a pure function of its configuration: serial and multi-process execution
give identical counts, and reports are byte-reproducible.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import __version__
from .bits import BitString
from .codes import get_code
from .enhanced import (
    ERROR_MODES, alice_verify_classical, alice_verify_quantum, bob_answer_challenge,
    bob_decrypt, bob_delete_quantum, cheat_ball_povm, cheat_measure_forge,
    encrypt_enhanced, make_classical_challenge, random_classical_certificate,
    random_conjugate_basis,
)
from .errors import DomainError, StrategyUnavailable
from .pke import KeyPair, keygen
from .qubit import DENSE_CAP, DenseState, ProductRegister, basis_state, dense_measure_qubit, to_dense
from .rng import derive_rng, trial_rng

STRATEGIES = ("honest-read", "honest-delete", "measure-forge", "ball-povm", "random-certificate")
CERTIFICATES = ("quantum", "classical")
LARGE_M = 10 ** 6


@dataclass(frozen=True)
class ExperimentConfig:
    code: str = "bch-31-16-7"
    error_mode: str = "bloch"
    trials: int = 10_000
    seed: int = 0
    strategy: str = "honest-read"
    pke_scheme: str | None = None
    certificate: str = "quantum"
    force_correct_guess: bool = False
    n_errors: int | None = None
    workers: int = 1
    dense_cap: int = DENSE_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.error_mode not in ERROR_MODES:
            raise ValueError(f"unknown error mode {self.error_mode!r}")
        if self.certificate not in CERTIFICATES:
            raise ValueError(f"unknown certificate type {self.certificate!r}")
        code = get_code(self.code)
        if self.strategy == "ball-povm" and code.n > self.dense_cap:
            raise StrategyUnavailable(
                f"ball-povm needs n <= {self.dense_cap}; {self.code} has n={code.n}")

    @property
    def scheme(self) -> str:
        return self.pke_scheme or f"toy-{get_code(self.code).k}"


@dataclass
class TrialCounts:
    """Aggregated outcome counts of a run; addition is order-insensitive."""

    trials: int = 0
    guess_correct: int = 0
    read_ok: int = 0
    accepted: int = 0
    joint: int = 0
    accepted_given_correct: int = 0
    read_given_correct: int = 0
    max_disturbance: float = 0.0

    def __add__(self, other: "TrialCounts") -> "TrialCounts":
        out = TrialCounts(**{f: getattr(self, f) + getattr(other, f)
                             for f in ("trials", "guess_correct", "read_ok", "accepted",
                                       "joint", "accepted_given_correct", "read_given_correct")})
        out.max_disturbance = max(self.max_disturbance, other.max_disturbance)
        return out


@dataclass(frozen=True)
class Estimate:
    name: str
    value: float
    stderr: float
    trials: int
    seed: int
    successes: int
    strategy: str = ""

    @classmethod
    def from_counts(cls, name: str, successes: int, trials: int, seed: int,
                    strategy: str = "") -> "Estimate":
        v = successes / trials if trials else float("nan")
        se = math.sqrt(v * (1 - v) / trials) if trials else float("nan")
        return cls(name, v, se, trials, seed, successes, strategy)

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        """Binomial check against ``target`` using the target's own spread."""
        se = math.sqrt(target * (1 - target) / self.trials)
        return abs(self.value - target) <= sigmas * se


@lru_cache(maxsize=32)
def experiment_keys(scheme: str, seed: int) -> KeyPair:
    return keygen(scheme, 128, derive_rng(seed, "keygen", scheme))


def _verify_classical_from(state, record, rng) -> bool:
    """Answer a fresh challenge from an already-held state and verify it."""
    challenge = make_classical_challenge(record, rng)
    if isinstance(state, DenseState):
        bits = []
        for i, B in enumerate(challenge):
            b, state = dense_measure_qubit(state, i, B, rng)
            bits.append(b)
    else:
        bits = state.measure_all(challenge, rng)
    return alice_verify_classical(record, BitString(bits))


def run_trial(cfg: ExperimentConfig, index: int) -> TrialCounts:
    kp = experiment_keys(cfg.scheme, cfg.seed)
    rng = trial_rng(cfg.seed, index)
    message = BitString.random(kp.public.plaintext_bits, rng)
    bundle, record = encrypt_enhanced(kp.public, message, cfg.code, cfg.error_mode, rng,
                                      n_errors=cfg.n_errors)
    g = record.global_basis if cfg.force_correct_guess else random_conjugate_basis(rng)
    correct = g == record.global_basis
    read = accepted = False
    disturbance = 0.0

    if cfg.strategy == "honest-read":
        read = bob_decrypt(kp.secret, bundle, rng, guess=g) == message
    elif cfg.strategy == "honest-delete":
        if cfg.certificate == "quantum":
            accepted = alice_verify_quantum(record, bob_delete_quantum(bundle), rng)
        else:
            cert = bob_answer_challenge(bundle, make_classical_challenge(record, rng), rng)
            accepted = alice_verify_classical(record, cert)
    elif cfg.strategy == "random-certificate":
        accepted = alice_verify_classical(record, random_classical_certificate(record.n, rng))
    elif cfg.strategy == "measure-forge":
        plaintext, kept = cheat_measure_forge(kp.secret, bundle, rng, guess=g)
        read = plaintext == message
        if cfg.certificate == "quantum":
            accepted = alice_verify_quantum(record, kept, rng)
        else:
            accepted = _verify_classical_from(kept, record, rng)
    elif cfg.strategy == "ball-povm":
        before = to_dense(ProductRegister([basis_state(B, b) for B, b in record.expected()]),
                          cfg.dense_cap)
        plaintext, post = cheat_ball_povm(kp.secret, bundle, g, rng, cap=cfg.dense_cap)
        if correct:
            disturbance = float(np.max(np.abs(post.amplitudes - before.amplitudes)))
        read = plaintext == message
        if cfg.certificate == "quantum":
            accepted = alice_verify_quantum(record, post, rng)
        else:
            accepted = _verify_classical_from(post, record, rng)

    return TrialCounts(1, int(correct), int(read), int(accepted), int(read and accepted),
                       int(correct and accepted), int(correct and read), disturbance)


def _run_range(args) -> TrialCounts:
    cfg, start, stop = args
    total = TrialCounts()
    for i in range(start, stop):
        total = total + run_trial(cfg, i)
    return total


def run_trials(cfg: ExperimentConfig) -> TrialCounts:
    """Run ``cfg.trials`` independent trials, in-process or on worker processes."""
    if cfg.workers <= 1:
        return _run_range((cfg, 0, cfg.trials))
    chunks = max(cfg.workers * 4, 1)
    bounds = np.linspace(0, cfg.trials, chunks + 1).astype(int)
    jobs = [(cfg, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    total = TrialCounts()
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for part in pool.map(_run_range, jobs):
            total = total + part
    return total


def estimate_p_reading(cfg: ExperimentConfig) -> Estimate:
    """Fraction of trials where an honest reader recovers the exact plaintext."""
    if cfg.strategy != "honest-read":
        raise StrategyUnavailable("p_reading needs strategy 'honest-read'")
    c = run_trials(cfg)
    return Estimate.from_counts("p_reading", c.read_ok, c.trials, cfg.seed, cfg.strategy)


def estimate_p_dist(cfg: ExperimentConfig) -> Estimate:
    """Fraction of trials where Alice rejects a cheater's certificate."""
    if cfg.strategy not in ("measure-forge", "ball-povm"):
        raise StrategyUnavailable("p_dist needs strategy 'measure-forge' or 'ball-povm'")
    c = run_trials(cfg)
    return Estimate.from_counts("p_dist", c.trials - c.accepted, c.trials, cfg.seed, cfg.strategy)


def estimate_p_nfp(cfg: ExperimentConfig) -> Estimate:
    """Fraction of trials where the presented certificate is accepted.

    With ``honest-delete`` this is the not-false-positive rate; with
    ``random-certificate`` it is the guessing baseline.
    """
    if cfg.strategy not in ("honest-delete", "random-certificate"):
        raise StrategyUnavailable("p_nfp needs strategy 'honest-delete' or 'random-certificate'")
    c = run_trials(cfg)
    return Estimate.from_counts("p_nfp", c.accepted, c.trials, cfg.seed, cfg.strategy)


def cheat_summary(cfg: ExperimentConfig) -> dict:
    """All cheating-strategy rates from a single run."""
    if cfg.strategy not in ("measure-forge", "ball-povm"):
        raise StrategyUnavailable("cheat_summary needs a cheating strategy")
    c = run_trials(cfg)
    s = cfg.seed
    return {
        "counts": c,
        "joint": Estimate.from_counts("read_and_accepted", c.joint, c.trials, s, cfg.strategy),
        "detection": Estimate.from_counts("p_dist", c.trials - c.accepted, c.trials, s,
                                          cfg.strategy),
        "read": Estimate.from_counts("read", c.read_ok, c.trials, s, cfg.strategy),
        "accepted_given_correct": Estimate.from_counts(
            "accepted_given_correct", c.accepted_given_correct, c.guess_correct, s, cfg.strategy),
        "read_given_correct": Estimate.from_counts(
            "read_given_correct", c.read_given_correct, c.guess_correct, s, cfg.strategy),
    }


def forge_acceptance_closed_form(e: int, error_mode: str = "bloch") -> float:
    """Mean acceptance of a register measured in the correct global basis.

    An error qubit with Bloch component ``n_b`` along the measured axis
    survives the measure-and-return round with probability ``(1 + n_b^2)/2``.
    Averaging over the sampled error bases gives 3/4 per qubit when the
    global basis is computational and 5/8 when it is Hadamard (uniform
    angles), and 3/4 in conjugate mode.
    """
    if error_mode == "bloch":
        return 0.5 * (0.75 ** e + 0.625 ** e)
    if error_mode == "conjugate":
        return 0.75 ** e
    raise ValueError(f"unknown error mode {error_mode!r}")


def estimate_forge_curve(code: str, e_values: Sequence[int], trials: int, seed: int,
                         error_mode: str = "bloch", workers: int = 1,
                         certificate: str = "quantum") -> list[tuple[int, Estimate]]:
    """Acceptance after measure-and-return with the correct basis, per error count."""
    out = []
    for e in e_values:
        cfg = ExperimentConfig(code=code, error_mode=error_mode, trials=trials, seed=seed,
                               strategy="measure-forge", force_correct_guess=True,
                               n_errors=e, workers=workers, certificate=certificate)
        c = run_trials(cfg)
        out.append((e, Estimate.from_counts(f"forge_accept_e{e}", c.accepted, c.trials, seed,
                                            "measure-forge")))
    return out


def forge_curve_slope(curve: Sequence[tuple[int, Estimate]]) -> float:
    """Least-squares slope of log2(acceptance) against e (e > 0 points only)."""
    pts = [(e, est.value) for e, est in curve if e > 0 and est.value > 0]
    if len(pts) < 2:
        raise ValueError("need at least two positive points")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.log2([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


class SealBounds(NamedTuple):
    p_dist: float
    p_nfp: float

    @property
    def exceeds_one(self) -> bool:
        return self.p_dist > 1.0 or self.p_nfp > 1.0


def seal_bounds(p: float, M: float) -> SealBounds:
    """Upper bounds on detection and not-false-positive at reading probability p.

    Returns the raw formula values (no clamping); check ``exceeds_one``.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if M < 2:
        raise DomainError(f"M must be at least 2, got {M}")
    p_dist = 0.5 + 0.25 * (2 * math.sqrt(1 - p) + 1 - p)
    p_nfp = 1 - p ** 2 - (1 - p) ** 2 / (M - 1)
    return SealBounds(p_dist, p_nfp)


CSV_COLUMNS = ("scheme", "p_reading", "p_dist", "p_nfp", "trials", "seed")


@dataclass
class ExperimentReport:
    rows: list[dict]
    notes: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r["scheme"], _fmt(r["p_reading"]), _fmt(r["p_dist"]["value"]),
                        _fmt(r["p_nfp"]), r["trials"], r["seed"]])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"version": __version__, "meta": self.meta, "rows": self.rows,
                           "notes": self.notes}, indent=2, sort_keys=False) + "\n"

    def save(self, path: str, fmt: str | None = None) -> None:
        fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
        text = self.to_json() if fmt == "json" else self.to_csv()
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _fmt(v) -> str:
    return "" if v is None else f"{v:.6f}"


def table1_report(trials: int = 10_000, seed: int = 0, workers: int = 1,
                  code: str = "bch-31-16-7", ball_code: str = "hamming-7-4-3",
                  error_mode: str = "bloch", M: float = LARGE_M,
                  certificate: str = "quantum") -> ExperimentReport:
    """Measured reading/detection/NFP rates next to the quantum-seal bounds."""
    base = ExperimentConfig(code=code, error_mode=error_mode, trials=trials, seed=seed,
                            workers=workers, certificate=certificate)
    reading = estimate_p_reading(replace(base, strategy="honest-read"))
    nfp = estimate_p_nfp(replace(base, strategy="honest-delete"))
    dist_ball = estimate_p_dist(replace(base, code=ball_code, strategy="ball-povm"))
    dist_forge = estimate_p_dist(replace(base, strategy="measure-forge"))
    bounds = seal_bounds(0.5, M)

    rows = [
        {"scheme": "upper bound (formula)", "p_reading": 0.5,
         "p_dist": {"value": bounds.p_dist, "strategy": "any"},
         "p_nfp": bounds.p_nfp, "trials": "", "seed": ""},
        {"scheme": "ours (measured, ball-povm)", "p_reading": reading.value,
         "p_dist": {"value": dist_ball.value, "strategy": f"ball-povm on {ball_code}"},
         "p_nfp": nfp.value, "trials": trials, "seed": seed},
        {"scheme": "ours (measured, measure-forge)", "p_reading": reading.value,
         "p_dist": {"value": dist_forge.value, "strategy": f"measure-forge on {code}"},
         "p_nfp": nfp.value, "trials": trials, "seed": seed},
        {"scheme": "ours (reference)", "p_reading": 0.5,
         "p_dist": {"value": 0.5, "strategy": "unspecified"},
         "p_nfp": 0.5, "trials": "", "seed": ""},
    ]
    notes = [
        f"measured rows: p_reading and p_nfp on {code} ({error_mode} error qubits, "
        f"{certificate} certificate); p_dist = P[Alice rejects | named strategy].",
        "p_nfp (dagger): honest-deleter certificates are accepted with probability 1 by "
        "construction; the reference value 0.5 is not reproduced.",
        f"upper bound row evaluated at p = 0.5, M = {M:g}; "
        f"values above 1 would be reported raw (exceeds_one={bounds.exceeds_one}).",
        "reference row lists the values published for this scheme, for comparison.",
    ]
    meta = {"code": code, "ball_code": ball_code, "error_mode": error_mode,
            "certificate": certificate, "trials": trials, "seed": seed,
            "estimates": {e.name + ":" + e.strategy: asdict(e)
                          for e in (reading, nfp, dist_ball, dist_forge)}}
    return ExperimentReport(rows, notes, meta)
