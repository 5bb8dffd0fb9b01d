"""Settings file parsing for batch runs.

Plain `key = value` lines; `->` opens a comment, a bracketed section hint
line is tolerated with a warning.  Unknown keys warn and are skipped so that
configuration written for richer engines still loads.  A handful of keys are
pinned to the single supported mode and rejected on other values.  Ranking
weights live in their own file referenced by preferenceFilePath: one line of
five or six whitespace-separated numbers, optionally wrapped in brackets.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import BadKeyValue, DuplicateKey, MissingRequired
from .redescriptions import MinerConfig

REQUIRED_KEYS = ("Input1", "minJS", "maxPval")

# key -> (MinerConfig field, type tag)
_ALGO_KEYS = {
    "minJS": ("min_jaccard", "float"),
    "maxPval": ("max_pvalue", "float"),
    "MinSupport": ("min_support", "int"),
    "MaxSupport": ("max_support", "int"),
    "WorkingRSSize": ("working_size", "int"),
    "MaxRSSize": ("max_size", "int"),
    "numRetRed": ("num_ret_red", "int"),
    "ATreeDepth": ("tree_depth", "int"),
    "numSupplementTrees": ("n_supplement_trees", "int"),
    "numIterations": ("num_iterations", "int"),
    "numRandomRestarts": ("num_random_restarts", "int"),
    "NumTarget": ("num_target", "int"),
    "numNewAttr": ("num_new_attr", "int"),
    "minAddRedJS": ("min_add_red_js", "float"),
    "ruleSizeNormalization": ("rule_size_norm", "float"),
    "allowLeftNeg": ("allow_left_neg", "bool"),
    "allowRightNeg": ("allow_right_neg", "bool"),
    "allowLeftDisj": ("allow_left_disj", "bool"),
    "allowRightDisj": ("allow_right_disj", "bool"),
    "allowSERed": ("allow_same_support", "bool"),
    "unguidedExpansion": ("unguided_expansion", "bool"),
    "joiningProcedure": ("joining_procedure", "bool"),
    "minimizeRules": ("minimize_rules", "bool"),
}

# keys accepted only at their pinned value
_PINNED_KEYS = {
    "numTrees": "1",
    "clusteringMode": "2",
    "redesSetSizeType": "exact",
    "optimizationType": "extraction",
    "jsType": "qnm",
}

_SIDE_TREES = re.compile(r"^W\d+SideTrees$")
_INPUT_KEY = re.compile(r"^Input(\d+)$")


@dataclass
class IoSettings:
    inputs: tuple[str, ...] = ()
    output_folder: str = "output"
    output_name: str = "redescriptions"
    preference_path: str | None = None


@dataclass
class Settings:
    miner: MinerConfig
    io: IoSettings
    raw: dict[str, str] = field(default_factory=dict)


def _parse_bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in ("yes", "true"):
        return True
    if v in ("no", "false"):
        return False
    raise BadKeyValue(key, f"expected yes/no, got {value!r}")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise BadKeyValue(key, f"expected an integer, got {value!r}") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value.strip())
    except ValueError:
        raise BadKeyValue(key, f"expected a number, got {value!r}") from None


def parse_preferences(text: str) -> tuple[float, ...]:
    """Ranking weights: five entries, or six with the size penalty.

    Whitespace-separated numbers on a single line, with or without one pair
    of surrounding brackets.
    """
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = body.split()
    try:
        weights = tuple(float(p) for p in parts)
    except ValueError:
        raise BadKeyValue("preferenceFilePath",
                          f"expected numbers, got {text!r}") from None
    if len(weights) not in (5, 6):
        raise BadKeyValue("preferenceFilePath",
                          f"expected 5 or 6 weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise BadKeyValue("preferenceFilePath", "weights must be nonnegative")
    if sum(weights) <= 0:
        raise BadKeyValue("preferenceFilePath", "weights must not all be zero")
    return weights


def _strip_comment(line: str) -> str:
    pos = line.find("->")
    return line[:pos] if pos >= 0 else line


def parse_settings(text: str) -> Settings:
    seen: dict[str, str] = {}
    for raw_line in text.splitlines():
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            warnings.warn(f"ignoring section hint {line}", stacklevel=2)
            continue
        if "=" not in line:
            raise BadKeyValue(line, "expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise BadKeyValue(line, "empty key")
        if key in seen:
            raise DuplicateKey(key)
        seen[key] = value

    for key in REQUIRED_KEYS:
        if key not in seen:
            raise MissingRequired(key)

    overrides: dict = {}
    inputs: dict[int, str] = {}
    io = IoSettings()
    for key, value in seen.items():
        m = _INPUT_KEY.match(key)
        if m:
            inputs[int(m.group(1))] = value
            continue
        if key == "OutputFolder":
            io.output_folder = value
            continue
        if key == "OutputFileName":
            io.output_name = value
            continue
        if key == "preferenceFilePath":
            io.preference_path = value
            continue
        if key in _PINNED_KEYS:
            if value.strip() != _PINNED_KEYS[key]:
                raise BadKeyValue(
                    key, f"only {_PINNED_KEYS[key]!r} is supported, got {value!r}")
            continue
        if _SIDE_TREES.match(key):
            if value.strip() != "classification":
                raise BadKeyValue(
                    key, f"only 'classification' is supported, got {value!r}")
            continue
        spec = _ALGO_KEYS.get(key)
        if spec is None:
            warnings.warn(f"ignoring unknown setting {key}", stacklevel=2)
            continue
        name, tag = spec
        if tag == "int":
            overrides[name] = _parse_int(key, value)
        elif tag == "float":
            overrides[name] = _parse_float(key, value)
        else:
            overrides[name] = _parse_bool(key, value)

    ordered = sorted(inputs)
    if ordered and (ordered[0] != 1 or ordered != list(range(1, len(ordered) + 1))):
        raise BadKeyValue("Input", "input files must be numbered 1..n without gaps")
    io.inputs = tuple(inputs[i] for i in ordered)

    miner = MinerConfig(**overrides).validate()
    return Settings(miner, io, dict(seen))


def load_settings(path: str | Path) -> Settings:
    """Parse a settings file, resolving the preferences file next to it."""
    path = Path(path)
    settings = parse_settings(path.read_text(encoding="utf-8"))
    pref = settings.io.preference_path
    if pref is not None:
        pref_path = Path(pref)
        if not pref_path.is_absolute():
            pref_path = path.parent / pref_path
        try:
            body = pref_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise BadKeyValue("preferenceFilePath", str(exc)) from None
        weights = parse_preferences(body)
        settings.miner = replace(settings.miner,
                                 preference_weights=weights).validate()
    return settings


def serialize_settings(settings: Settings) -> str:
    """Stable text form: inputs first, then io paths, then algorithm keys."""
    cfg = settings.miner
    lines = []
    for i, p in enumerate(settings.io.inputs, start=1):
        lines.append(f"Input{i} = {p}")
    lines.append(f"OutputFolder = {settings.io.output_folder}")
    lines.append(f"OutputFileName = {settings.io.output_name}")
    if settings.io.preference_path is not None:
        lines.append(f"preferenceFilePath = {settings.io.preference_path}")
    for key, (name, tag) in _ALGO_KEYS.items():
        value = getattr(cfg, name)
        if tag == "bool":
            lines.append(f"{key} = {'yes' if value else 'no'}")
        else:
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
