# Modules/experiment.py
# ------------------------------------------------------------
# Experiment configuration and flat-file outputs:
# - ExperimentConfig (validated, round-trips through the spec JSON)
# - spec file: tower + code parameters (primes, polynomials, D, l)
# - (failed, helpers) selection: explicit | all subsets / rest | all
# - bandwidth table for every legal (h, d): CSV (+ xlsx, + PNG chart)
# - transcripts and verification reports as JSON
# ------------------------------------------------------------

from __future__ import annotations

import itertools
import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from Modules.errors import ParameterError  # noqa: E402
from Modules.repair_engine import bandwidth_summary, make_download_plan  # noqa: E402
from Modules.repair_sets import is_supported  # noqa: E402
from Modules.tower_field import (  # noqa: E402
    TWO_ERASURE,
    UNIVERSAL,
    Mode,
    TowerSpec,
    TwoErasure,
    Universal,
    build_tower,
)

logger = logging.getLogger(__name__)

# -----------------------------
# CONFIG
# -----------------------------
DEFAULT_P = 2
DEFAULT_SEED = 2017
DEFAULT_TRIALS = 25
OUTPUT_DIR = "outputs"

Selector = Union[str, Tuple[int, ...]]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    mode: str = UNIVERSAL
    r: Optional[int] = None
    d: Optional[int] = None
    p: int = DEFAULT_P
    h: int = 1
    failed: Selector = "all"
    helpers: Selector = "rest"
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    out: str = OUTPUT_DIR

    def __post_init__(self):
        if self.mode not in (UNIVERSAL, TWO_ERASURE):
            raise ParameterError(f"mode must be '{UNIVERSAL}' or '{TWO_ERASURE}', got {self.mode!r}")
        if not 1 <= self.k < self.n:
            raise ParameterError(f"k < n required (and k >= 1), got n={self.n}, k={self.k}")
        if self.mode == UNIVERSAL and self.r is None:
            object.__setattr__(self, "r", self.n - self.k)
        if self.mode == TWO_ERASURE and self.d is None:
            raise ParameterError("two-erasure mode needs --d")
        if self.trials < 0:
            raise ParameterError(f"trials >= 0 required, got {self.trials}")

    def tower_mode(self) -> Mode:
        return Universal(self.r) if self.mode == UNIVERSAL else TwoErasure(self.d)

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        for key in ("failed", "helpers"):
            if isinstance(out[key], tuple):
                out[key] = list(out[key])
        return out

    @classmethod
    def from_dict(cls, raw: Dict[str, object]) -> "ExperimentConfig":
        raw = dict(raw)
        for key in ("failed", "helpers"):
            if isinstance(raw.get(key), list):
                raw[key] = tuple(raw[key])
        return cls(**raw)


def parse_selector(text: Optional[str], default: str) -> Selector:
    """'1,2' -> (1, 2); 'all' / 'rest' pass through."""
    if text is None or text.strip() == "":
        return default
    text = text.strip().lower()
    if text in ("all", "rest"):
        return text
    try:
        return tuple(sorted(int(x) for x in text.split(",") if x.strip()))
    except ValueError as e:
        raise ParameterError(f"node list must be comma-separated integers, 'all' or 'rest', got {text!r}") from e


def select_pairs(cfg: ExperimentConfig, spec: TowerSpec) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Every (failed, helpers) pair the selectors describe."""
    n = spec.n
    if isinstance(cfg.failed, tuple):
        failed_sets = [cfg.failed]
    else:
        failed_sets = list(itertools.combinations(range(1, n + 1), cfg.h))
    for F in failed_sets:
        rest = tuple(j for j in range(1, n + 1) if j not in F)
        if isinstance(cfg.helpers, tuple):
            yield tuple(F), cfg.helpers
        elif cfg.helpers == "rest":
            yield tuple(F), rest
        else:
            d = cfg.d if cfg.d is not None else len(rest)
            for R in itertools.combinations(rest, d):
                yield tuple(F), R


# -----------------------------
# Spec files
# -----------------------------
def spec_document(spec: TowerSpec, cfg: ExperimentConfig) -> Dict[str, object]:
    return {
        "config": cfg.to_dict(),
        "tower": {
            "p": spec.p,
            "mode": spec.mode.kind,
            "mode_param": spec.mode.param,
            "n": spec.n,
            "k": spec.k,
            "D": spec.D,
            "primes": list(spec.primes),
            "min_polys": [list(f.coeffs) for f in spec.min_polys],
            "beta_poly": list(spec.beta_poly.coeffs),
            "l": spec.degree,
        },
    }


def write_json(path: str, payload: Dict[str, object]) -> str:
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return path


def read_json(path: str) -> Dict[str, object]:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def build_from_config(cfg: ExperimentConfig) -> TowerSpec:
    return build_tower(cfg.p, cfg.tower_mode(), cfg.n, cfg.k)


def load_spec_file(path: str) -> Tuple[ExperimentConfig, TowerSpec]:
    """Rebuild the tower from a spec file and confirm it matches what was stored."""
    doc = read_json(path)
    cfg = ExperimentConfig.from_dict(doc["config"])
    spec = build_from_config(cfg)
    stored = doc.get("tower", {})
    if stored.get("primes") != list(spec.primes) or stored.get("l") != spec.degree:
        raise ParameterError(f"spec file {path} does not match the tower rebuilt from its config")
    return cfg, spec


# -----------------------------
# Bandwidth tables
# -----------------------------
def legal_pairs(spec: TowerSpec) -> List[Tuple[int, int]]:
    n, k = spec.n, spec.k
    return [
        (h, d)
        for h in range(1, n - k + 1)
        for d in range(k, n - h + 1)
        if is_supported(spec.mode, h, d, k, n)
    ]


def bandwidth_table(spec: TowerSpec) -> pd.DataFrame:
    """One row per legal (h, d), planned on failed = 1..h, helpers = the next d nodes."""
    rows = []
    for h, d in legal_pairs(spec):
        failed = tuple(range(1, h + 1))
        helpers = tuple(range(h + 1, h + d + 1))
        rows.append(bandwidth_summary(make_download_plan(spec, failed, helpers)))
    df = pd.DataFrame(rows)
    logger.info(f"Bandwidth table: {len(df)} legal (h, d) rows")
    return df


def plot_bandwidth(df: pd.DataFrame, path: str) -> str:
    labels = [f"h={h}, d={d}" for h, d in zip(df["h"], df["d"])]
    x = range(len(df))
    plt.figure(figsize=(10, 4))
    width = 0.27
    plt.bar([i - width for i in x], df["total"], width=width, label="planned")
    plt.bar(list(x), df["cutset"], width=width, label="cut-set bound")
    plt.bar([i + width for i in x], df["naive"], width=width, label="naive (k·l)")
    plt.xticks(list(x), labels)
    plt.ylabel("Base-field symbols")
    plt.title("Repair bandwidth per (h, d)")
    plt.legend()
    plt.tight_layout()
    plt.savefig(path)
    plt.close()
    return path


def write_table(df: pd.DataFrame, csv_path: str, excel: bool = True, plot_path: Optional[str] = None) -> List[str]:
    folder = os.path.dirname(csv_path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    df.to_csv(csv_path, index=False)
    written = [csv_path]

    if excel:
        xlsx_path = os.path.splitext(csv_path)[0] + ".xlsx"
        try:
            df.to_excel(xlsx_path, index=False, engine="openpyxl")
            written.append(xlsx_path)
        except Exception as e:
            logger.warning(f"⚠️  Could not write Excel ({xlsx_path}): {e}")
    if plot_path:
        written.append(plot_bandwidth(df, plot_path))
    return written
