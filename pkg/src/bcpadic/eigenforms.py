"""Packaged newform data and the classical symbols attached to it.

Data files are JSON records {label, level, weight, source, coefficients}
with coefficients keyed by prime.  The directory is the package's
``data`` folder unless BCPADIC_DATA_DIR points elsewhere.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .modsym import PlusMinusSymbols, eigen_symbols

DATA_ENV = "BCPADIC_DATA_DIR"


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path(__file__).parent / "data"


@dataclass(frozen=True)
class Eigenform:
    label: str
    level: int
    weight: int
    coefficients: dict[int, int]
    source: str = ""

    @property
    def k(self) -> int:
        """Weight of the symbol coefficient module V_k, i.e. weight - 2."""
        return self.weight - 2

    def a(self, ell: int) -> int:
        try:
            return self.coefficients[ell]
        except KeyError:
            raise KeyError(f"a_{ell} is not recorded for {self.label}") from None


def load_eigenform(label: str, directory: Path | None = None) -> Eigenform:
    path = (directory or data_dir()) / f"{label}.json"
    if not path.exists():
        raise FileNotFoundError(f"no eigenform data for {label!r} in {path.parent}")
    raw = json.loads(path.read_text())
    f = Eigenform(
        label=raw["label"],
        level=int(raw["level"]),
        weight=int(raw["weight"]),
        coefficients={int(q): int(v) for q, v in raw["coefficients"].items()},
        source=raw.get("source", ""),
    )
    _check_ramanujan(f)
    return f


def _check_ramanujan(f: Eigenform) -> None:
    # |a_l| <= 2 l^((weight-1)/2) away from the level; catches mistyped data
    for ell, a in f.coefficients.items():
        if f.level % ell and a * a > 4 * ell ** (f.weight - 1):
            raise ValueError(f"{f.label}: a_{ell} = {a} violates the Ramanujan bound")


@lru_cache(maxsize=32)
def _symbols_cached(label: str, directory: str | None) -> PlusMinusSymbols:
    f = load_eigenform(label, Path(directory) if directory else None)
    return eigen_symbols(f.level, f.k, f.coefficients)


def form_symbols(form: Eigenform | str) -> PlusMinusSymbols:
    """Normalised plus and minus symbols of a packaged form."""
    label = form.label if isinstance(form, Eigenform) else form
    env = os.environ.get(DATA_ENV)
    return _symbols_cached(label, env)
