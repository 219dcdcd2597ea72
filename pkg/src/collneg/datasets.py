"""Reproducible generation and persistence of (probabilities, negativity) records.

Record i of a dataset is a pure function of (master seed, i): ten collective
probabilities in the canonical configuration order plus the exact negativity
label.  Two interchangeable encodings are supported - a human-auditable CSV
and a compact little-endian binary - and both round-trip losslessly.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import measurement, states

__all__ = [
    "FORMAT_VERSION",
    "GENERATOR_DIGEST",
    "CSV_HEADER",
    "Dataset",
    "DatasetFormatError",
    "generate",
    "save",
    "load",
    "split",
    "zero_negativity_fraction",
]

FORMAT_VERSION = 1
# Fingerprint of the generation procedure; bumped together with FORMAT_VERSION
# whenever the sampling recipe or the record layout changes.
GENERATOR_DIGEST = hashlib.sha256(b"collneg-generator-v1").hexdigest()[:16]

CSV_HEADER = ",".join(measurement.FEATURE_NAMES) + ",negativity"

_MAGIC = b"CNEG"
_CHUNK = 4096  # fixed generation chunk; must not depend on thread count


class DatasetFormatError(ValueError):
    """Unreadable, truncated, or version-incompatible dataset file."""


@dataclass
class Dataset:
    probabilities: np.ndarray = field(repr=False)  # (n, 10) float64
    negativities: np.ndarray = field(repr=False)   # (n,) float64
    seed: int = 0
    version: int = FORMAT_VERSION
    digest: str = GENERATOR_DIGEST

    def __len__(self) -> int:
        return self.negativities.shape[0]

    def features(self, b: int) -> np.ndarray:
        """The first ``b`` probability columns, b in 5..10."""
        if not 5 <= b <= 10:
            raise ValueError(f"b must be in 5..10, got {b}")
        return self.probabilities[:, :b]


def _generate_chunk(seed: int, start: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    rhos = states.sample_states(seed, start, count)
    probs = measurement.probabilities_batch(states.rho4_batch(rhos))
    return probs, states.negativity_batch(rhos)


def generate(n: int, seed: int, threads: int = 1) -> Dataset:
    """Generate ``n`` records under a master seed.

    The result is identical for any thread count: work is split into fixed
    chunks of index ranges and every record depends only on (seed, index).
    """
    if n < 0:
        raise ValueError("record count must be non-negative")
    probs = np.empty((n, 10))
    negs = np.empty(n)
    starts = range(0, n, _CHUNK)

    def fill(start: int) -> None:
        count = min(_CHUNK, n - start)
        probs[start:start + count], negs[start:start + count] = _generate_chunk(seed, start, count)

    if threads > 1 and n > _CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)
    return Dataset(probabilities=probs, negativities=negs, seed=seed)


def zero_negativity_fraction(ds: Dataset, tol: float = 1e-6) -> float:
    """Fraction of records whose negativity is numerically zero."""
    if len(ds) == 0:
        return 0.0
    return float(np.mean(ds.negativities < tol))


# ---------------------------------------------------------------------------
# Persistence

def save(ds: Dataset, path: str | Path, fmt: str = "csv") -> None:
    if fmt == "csv":
        _save_csv(ds, Path(path))
    elif fmt == "bin":
        _save_binary(ds, Path(path))
    else:
        raise ValueError(f"unknown format {fmt!r} (expected 'csv' or 'bin')")


def load(path: str | Path) -> Dataset:
    """Load a dataset, sniffing the encoding from the file contents."""
    path = Path(path)
    try:
        head = path.open("rb").read(4)
    except OSError as exc:
        raise DatasetFormatError(f"{path}: {exc}") from exc
    if head == _MAGIC:
        return _load_binary(path)
    return _load_csv(path)


def _save_csv(ds: Dataset, path: Path) -> None:
    rows = np.column_stack([ds.probabilities, ds.negativities]) if len(ds) else np.empty((0, 11))
    with path.open("w") as fh:
        fh.write(
            f"# collneg dataset v{ds.version} seed={ds.seed} count={len(ds)} digest={ds.digest}\n"
        )
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _load_csv(path: Path) -> Dataset:
    with path.open() as fh:
        meta_line = fh.readline().strip()
        header_line = fh.readline().strip()
        body = fh.read()
    if not meta_line.startswith("# collneg dataset v"):
        raise DatasetFormatError(f"{path}: missing dataset metadata line")
    tokens = meta_line.split()
    meta = dict(tok.split("=", 1) for tok in tokens[4:])
    version = int(tokens[3].lstrip("v"))
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"{path}: unsupported dataset version {version}")
    if header_line != CSV_HEADER:
        raise DatasetFormatError(f"{path}: unexpected column header {header_line!r}")
    rows = []
    for lineno, line in enumerate(body.splitlines(), start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 11:
            raise DatasetFormatError(f"{path}:{lineno}: expected 11 columns, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise DatasetFormatError(f"{path}:{lineno}: {exc}") from exc
    data = np.array(rows, dtype=float).reshape(-1, 11)
    count = int(meta["count"])
    if data.shape[0] != count:
        raise DatasetFormatError(
            f"{path}: header declares {count} records, file has {data.shape[0]}"
        )
    return Dataset(
        probabilities=data[:, :10],
        negativities=data[:, 10],
        seed=int(meta["seed"]),
        version=version,
        digest=meta.get("digest", GENERATOR_DIGEST),
    )


def _save_binary(ds: Dataset, path: Path) -> None:
    header = np.zeros(1, dtype=[("version", "<u4"), ("seed", "<u8"), ("count", "<u8")])
    header["version"] = ds.version
    header["seed"] = ds.seed
    header["count"] = len(ds)
    rows = np.column_stack([ds.probabilities, ds.negativities]).astype("<f8")
    with path.open("wb") as fh:
        fh.write(_MAGIC)
        fh.write(header.tobytes())
        fh.write(rows.tobytes())


def _load_binary(path: Path) -> Dataset:
    data = path.read_bytes()
    if data[:4] != _MAGIC:
        raise DatasetFormatError(f"{path}: bad magic bytes")
    header_dtype = np.dtype([("version", "<u4"), ("seed", "<u8"), ("count", "<u8")])
    if len(data) < 4 + header_dtype.itemsize:
        raise DatasetFormatError(f"{path}: truncated header")
    header = np.frombuffer(data, dtype=header_dtype, count=1, offset=4)[0]
    version = int(header["version"])
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"{path}: unsupported dataset version {version}")
    count = int(header["count"])
    body = data[4 + header_dtype.itemsize:]
    if len(body) != count * 11 * 8:
        raise DatasetFormatError(
            f"{path}: expected {count * 11 * 8} record bytes, found {len(body)}"
        )
    rows = np.frombuffer(body, dtype="<f8").reshape(count, 11).astype(float)
    return Dataset(
        probabilities=rows[:, :10],
        negativities=rows[:, 10],
        seed=int(header["seed"]),
        version=version,
    )


def split(ds: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded permutation partition into (train, test); train gets ``fraction``."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    perm = np.random.default_rng(seed).permutation(len(ds))
    cut = int(len(ds) * fraction)
    parts = []
    for idx in (perm[:cut], perm[cut:]):
        parts.append(
            Dataset(
                probabilities=ds.probabilities[idx],
                negativities=ds.negativities[idx],
                seed=ds.seed,
                version=ds.version,
                digest=ds.digest,
            )
        )
    return parts[0], parts[1]
