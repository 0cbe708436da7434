"""Measured degree sequences ``d_n = deg(K^n)``.

The probe restricts ``K^n`` to a generic line ``L(t) = a + t*b`` in
``P(M_q)``. Starting from the q**2 linear polynomials of the line, each step
applies Khat to the current tuple of univariate polynomials and divides out
the common content. The degree of the reduced tuple is ``d_n``.

Two probes on independent (line, prime) pairs must agree; on mismatch a
third run decides by majority. A bad line or prime can only lower the
measured degree, so agreement at the maximum is strong evidence.

Example
-------
>>> [r.degree for r in probe_degrees(3, 3, seed=1)]
[1, 7, 16, 19]
"""
from __future__ import annotations

import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import flint

from .errors import (
    DegenerateInputError,
    InvalidInputError,
    InvalidSizeError,
    ProbeFailureError,
    ScopeError,
)
from .exact_arith import QQ, MPoly, PrimeField, UPoly, random_prime, tuple_content_reduce
from .matrix_maps import build_Khat, compose_IJ, khat_poly

__all__ = [
    "DegreeRecord",
    "LineProbe",
    "derive_seed",
    "run_probe",
    "probe_degrees",
    "estimate_delta",
    "DeltaEstimate",
    "symbolic_degree_oracle",
    "DegreeCache",
]

MAX_RESAMPLES = 5
QQ_ENTRY_BOUND = 10**6


@dataclass
class DegreeRecord:
    """One value of ``deg(K^n)``, measured or predicted."""

    q: int
    n: int
    degree: int
    method: str
    seeds: List[int] = field(default_factory=list)
    primes: List[int] = field(default_factory=list)
    agreement: int = 1
    removed_degree: Optional[int] = None
    convention: Optional[str] = None

    def to_dict(self) -> dict:
        d = {
            "q": self.q,
            "n": self.n,
            "degree": self.degree,
            "method": self.method,
            "seeds": list(self.seeds),
            "primes": list(self.primes),
            "agreement": self.agreement,
        }
        if self.removed_degree is not None:
            d["removed_degree"] = self.removed_degree
        if self.convention is not None:
            d["convention"] = self.convention
        return d


def derive_seed(root: int, label: str, k: int = 0) -> int:
    """Child seed: first 8 bytes of ``sha256(f"{root}/{label}/{k}")``."""
    digest = hashlib.sha256(f"{root}/{label}/{k}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# -- polynomial backends ---------------------------------------------------------


class _FlintFp:
    name = "flint"

    def __init__(self, p: int):
        self.p = p

    def linear(self, a: int, b: int):
        return flint.nmod_poly([a, b], self.p)


class _FlintZZ:
    name = "flint"
    p = None

    def linear(self, a: int, b: int):
        return flint.fmpz_poly([a, b])


class _PythonBackend:
    name = "python"

    def __init__(self, domain):
        self.domain = domain
        self.p = domain.modulus

    def linear(self, a: int, b: int):
        return UPoly([a, b], self.domain)


def _backend(field_kind: str, backend: str, prime: Optional[int]):
    if field_kind == "fp":
        if prime is None:
            raise InvalidInputError("modular probe needs a prime")
        if backend == "flint":
            return _FlintFp(prime)
        return _PythonBackend(PrimeField(prime))
    if field_kind == "qq":
        return _FlintZZ() if backend == "flint" else _PythonBackend(QQ)
    raise InvalidInputError(f"unknown field {field_kind!r}")


# -- one probe --------------------------------------------------------------------


@dataclass(frozen=True)
class LineProbe:
    """A line ``a + t*b`` in P(M_q) with every entry of a and b nonzero."""

    q: int
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    seed: int
    prime: Optional[int]

    @classmethod
    def sample(cls, q: int, seed: int, field_kind: str = "fp", prime_bits: int = 61):
        rng = random.Random(seed)
        n = q * q
        if field_kind == "fp":
            p = random_prime(rng, prime_bits)
            a = tuple(rng.randrange(1, p) for _ in range(n))
            b = tuple(rng.randrange(1, p) for _ in range(n))
        else:
            p = None
            a = tuple(rng.randint(1, QQ_ENTRY_BOUND) for _ in range(n))
            b = tuple(rng.randint(1, QQ_ENTRY_BOUND) for _ in range(n))
        if _proportional(a, b, p):
            raise DegenerateInputError("line endpoints coincide projectively")
        return cls(q, a, b, seed, p)


def _proportional(a, b, p) -> bool:
    if p is None:
        return all(Fraction(x, a[0]) == Fraction(y, b[0]) for x, y in zip(a, b))
    r = b[0] * pow(a[0], -1, p) % p
    return all((r * x - y) % p == 0 for x, y in zip(a, b))


def run_probe(
    line: LineProbe, n_max: int, backend: str = "flint"
) -> List[Tuple[int, int]]:
    """``[(d_n, removed_n) for n = 0..n_max]`` along one line.

    ``removed_n`` is the degree of the content divided out at step n.
    Raises DegenerateInputError if the line runs into the indeterminacy
    locus (some step gives the zero tuple).
    """
    q = line.q
    be = _backend("fp" if line.prime else "qq", backend, line.prime)
    flat = [be.linear(x, y) for x, y in zip(line.a, line.b)]
    out = [(1, 0)]
    for _ in range(n_max):
        entries = [flat[i * q:(i + 1) * q] for i in range(q)]
        if any(e.is_zero() for e in flat):
            # Jhat would vanish identically on this curve
            raise DegenerateInputError("a coordinate vanishes identically along the line")
        image = khat_poly(entries)
        flat, removed = tuple_content_reduce(image)
        out.append((max(f.degree() for f in flat), removed))
    return out


# -- protocol -----------------------------------------------------------------------


def _run_with_resample(q, n_max, root, label, field_kind, prime_bits, backend, cache):
    last = None
    for k in range(MAX_RESAMPLES + 1):
        seed = derive_seed(root, label, k)
        try:
            line = LineProbe.sample(q, seed, field_kind, prime_bits)
        except DegenerateInputError as exc:
            last = exc
            continue
        cached = cache.lookup_run(q, n_max, "probe", seed, line.prime) if cache else None
        if cached is not None:
            return line, cached
        try:
            result = run_probe(line, n_max, backend)
        except DegenerateInputError as exc:
            last = exc
            continue
        if cache:
            cache.store_run(q, result, "probe", seed, line.prime)
        return line, result
    raise ProbeFailureError(
        f"probe q={q} failed after {MAX_RESAMPLES} resamples: {last}"
    )


def probe_degrees(
    q: int,
    n_max: int,
    seed: int = 0,
    prime_bits: int = 61,
    field: str = "fp",
    backend: str = "flint",
    cache_path: Optional[os.PathLike] = None,
) -> List[DegreeRecord]:
    """Degrees ``d_0..d_{n_max}`` from independent line probes that agree.

    Parameters
    ----------
    field : {"fp", "qq"}
        Coefficients in a random prime field (default) or in the integers.
    backend : {"flint", "python"}
        Polynomial arithmetic from python-flint or from :class:`UPoly`.
    cache_path : path, optional
        JSON-lines file of per-run results; runs already present are reused.
    """
    if not isinstance(q, int) or q < 2:
        raise InvalidSizeError("q must be an integer >= 2")
    if n_max < 0:
        raise InvalidInputError("n_max must be >= 0")
    if backend not in ("flint", "python"):
        raise InvalidInputError(f"unknown backend {backend!r}")
    cache = DegreeCache(cache_path) if cache_path else None
    runs = []
    for r in range(2):
        runs.append(
            _run_with_resample(
                q, n_max, seed, f"probe/q{q}/run{r}", field, prime_bits, backend, cache
            )
        )
    if any(runs[0][1][n][0] != runs[1][1][n][0] for n in range(n_max + 1)):
        runs.append(
            _run_with_resample(
                q, n_max, seed, f"probe/q{q}/run2", field, prime_bits, backend, cache
            )
        )
    records = []
    for n in range(n_max + 1):
        degs = [res[n][0] for _, res in runs]
        best = max(set(degs), key=lambda d: (degs.count(d), d))
        votes = degs.count(best)
        if votes < 2:
            raise ProbeFailureError(
                f"probe runs disagree at q={q}, n={n}: {degs}"
            )
        agreeing = [i for i, d in enumerate(degs) if d == best]
        records.append(
            DegreeRecord(
                q=q,
                n=n,
                degree=best,
                method="probe",
                seeds=[runs[i][0].seed for i in agreeing],
                primes=[runs[i][0].prime for i in agreeing if runs[i][0].prime],
                agreement=votes,
                removed_degree=runs[agreeing[0]][1][n][1],
            )
        )
    return records


# -- growth estimate ----------------------------------------------------------------


@dataclass(frozen=True)
class DeltaEstimate:
    """Crude growth diagnostics. Not a certified value of the dynamical degree."""

    last_ratio: Fraction
    fitted_ratio: Fraction

    def __float__(self):
        return float(self.last_ratio)


def estimate_delta(records: Sequence) -> DeltaEstimate:
    """Ratio ``d_n / d_{n-1}`` at the last n, and the ratio of the last two differences.

    Accepts DegreeRecords or plain integers. The fitted ratio is
    ``(d_n - d_{n-1}) / (d_{n-1} - d_{n-2})``, the growth factor of a
    sequence ``c + k*r**n`` through the last three terms; it is 1 when the
    differences vanish.
    """
    degs = [r.degree if isinstance(r, DegreeRecord) else int(r) for r in records]
    if len(degs) < 3:
        raise InvalidInputError("estimate_delta needs at least 3 consecutive records")
    if any(d <= 0 for d in degs):
        raise InvalidInputError("degrees must be positive")
    last = Fraction(degs[-1], degs[-2])
    d1 = degs[-1] - degs[-2]
    d0 = degs[-2] - degs[-3]
    fitted = Fraction(1) if d0 == 0 or d1 == 0 else Fraction(d1, d0)
    return DeltaEstimate(last, fitted)


# -- symbolic oracle ------------------------------------------------------------------


def _plane_entries(q: int, rng: random.Random) -> List[MPoly]:
    # x = a + u*b + w*c in variables (u, w): a 2-parameter affine plane
    out = []
    for _ in range(q * q):
        a, b, c = (rng.randint(1, 50) for _ in range(3))
        out.append(MPoly(2, {(0, 0): a, (1, 0): b, (0, 1): c}))
    return out


def _restrict_to_line(f: MPoly, u0, u1, w0, w1) -> UPoly:
    # substitute u = u0 + u1 t, w = w0 + w1 t
    u = UPoly([u0, u1], QQ)
    w = UPoly([w0, w1], QQ)
    acc = UPoly.zero(QQ)
    for (eu, ew), c in f.terms.items():
        acc = acc + (u**eu * w**ew).scale(c)
    return acc


def symbolic_degree_oracle(q: int, n: int, seed: int = 0) -> DegreeRecord:
    """Degree of K^n by symbolic expansion, for ``q <= 3`` and ``n <= 2``.

    n = 1 expands ``Ihat o Jhat`` and checks it equals ``Pi**(q-2) * Khat``
    component by component. n = 2 composes Khat with itself on a
    2-parameter plane, then restricts to independent lines in that plane
    and compares the reduced degrees.
    """
    if not (2 <= q <= 3 and 0 <= n <= 2):
        raise ScopeError("symbolic oracle is limited to q <= 3, n <= 2")
    if n == 0:
        return DegreeRecord(q, 0, 1, "symbolic")
    khat = build_Khat(q)
    if n == 1:
        composed = compose_IJ(q).components
        pi_power = MPoly.monomial(q * q, [q - 2] * (q * q))
        for c, k in zip(composed, khat.components):
            if c != pi_power * k:
                raise AssertionError("Ihat o Jhat != Pi^(q-2) Khat")
        removed = composed[0].total_degree() - khat.degree
        return DegreeRecord(q, 1, khat.degree, "symbolic", removed_degree=removed)
    rng = random.Random(derive_seed(seed, f"symbolic/q{q}"))
    plane = _plane_entries(q, rng)
    first = [c.compose(plane) for c in khat.components]
    second = [c.compose(first) for c in khat.components]
    degs = []
    for _ in range(2):
        u0, u1, w0, w1 = (rng.randint(1, 10**4) for _ in range(4))
        line = [_restrict_to_line(f, u0, u1, w0, w1) for f in second]
        reduced, _ = tuple_content_reduce(line)
        degs.append(max(f.degree() for f in reduced))
    if degs[0] != degs[1]:
        raise ProbeFailureError(f"symbolic lines disagree: {degs}")
    return DegreeRecord(q, 2, degs[0], "symbolic", seeds=[seed], agreement=2)


# -- cache ------------------------------------------------------------------------------


class DegreeCache:
    """Append-only JSON-lines store of per-run degrees.

    Each line is ``{q, n, degree, method, seed, prime, timestamp}`` (plus
    ``removed_degree`` for probes). Writes go through a single ``os.write``
    on an ``O_APPEND`` descriptor, so concurrent writers never interleave
    within a record.
    """

    FILENAME = "degrees.jsonl"

    def __init__(self, path: os.PathLike):
        path = Path(path)
        if path.suffix != ".jsonl":
            path = path / self.FILENAME
        self.path = path

    def records(self) -> List[dict]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out

    def append(self, record: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        data = (json.dumps(record) + "\n").encode()
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, data)
        finally:
            os.close(fd)

    def _index(self) -> Dict[tuple, dict]:
        return {
            (r["q"], r["n"], r["method"], r["seed"], r["prime"]): r for r in self.records()
        }

    def lookup_run(self, q, n_max, method, seed, prime):
        idx = self._index()
        out = []
        for n in range(n_max + 1):
            r = idx.get((q, n, method, seed, prime))
            if r is None:
                return None
            out.append((r["degree"], r.get("removed_degree", 0)))
        return out

    def store_run(self, q, result, method, seed, prime) -> None:
        idx = self._index()
        for n, (deg, removed) in enumerate(result):
            if (q, n, method, seed, prime) in idx:
                continue
            self.append(
                {
                    "q": q,
                    "n": n,
                    "degree": deg,
                    "method": method,
                    "seed": seed,
                    "prime": prime,
                    "timestamp": round(time.time(), 3),
                    "removed_degree": removed,
                }
            )

    def clear(self) -> int:
        n = len(self.records())
        if self.path.exists():
            self.path.unlink()
        return n

    def summary(self) -> List[dict]:
        groups: Dict[tuple, List[int]] = {}
        for r in self.records():
            groups.setdefault((r["q"], r["method"]), []).append(r["n"])
        return [
            {"q": q, "method": m, "records": len(ns), "max_n": max(ns)}
            for (q, m), ns in sorted(groups.items())
        ]
