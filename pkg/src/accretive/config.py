"""Configuration parsing for the analysis pipeline.

Grammar: flat ``key = value`` lines, optional ``[section]`` headers (for
readability only, keys are global), ``#`` comments, lists comma-separated.
Complex values accept both ``i`` and ``j`` suffixes.  Parse failures carry
line and column; well-formed configs that break a model rule raise
ConstraintError naming the rule.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, fields

import numpy as np

from .assembly import FractionalTerm, required_left_sign
from .exceptions import ConstraintError, ParseError

__all__ = ["AnalysisConfig", "parse_config", "load_config", "CHECK_IDS", "SEED_ENV_VAR"]

SEED_ENV_VAR = "ACCRETIVE_SEED"

FAMILIES = ("elliptic+frac", "highorder", "selftest2x2")

CHECK_IDS = (
    "positive_sector",
    "resolvent_bounds",
    "real_part",
    "form_bounds",
    "two_sided_estimate",
    "schatten",
    "completeness_hypothesis",
    "eigenvalue_sums",
    "asymptotic_decay",
    "compact_resolvent",
)

_MAX_HIGHORDER = 8


@dataclass(frozen=True)
class AnalysisConfig:
    """Validated analysis configuration with defaults filled."""

    family: str = "elliptic+frac"
    a: float = 0.0
    b: float = 1.0
    sizes: tuple = (32, 64)
    # elliptic+frac family
    coefficient: float = 1.0
    alpha: float = 0.5
    weight: float = 1.0
    side: str = "left"
    # highorder family
    order_k: int = 1
    diff_coeffs: tuple = (1.0 + 0.0j, -1.0 + 0.0j)
    frac_terms: tuple = (FractionalTerm(1.0, 0.5, "left"),)
    # shared
    scheme: str = "trapezoid"
    checks: tuple = CHECK_IDS
    tolerance: float = 1e-9
    trend_tolerance: float = 0.05
    p_list: tuple = (1.0, 2.0)
    eps: float = 0.25
    seed: int = 2024
    angles: int = 64
    vectors: int = 256

    def to_jsonable(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "diff_coeffs":
                value = [[c.real, c.imag] for c in value]
            elif f.name == "frac_terms":
                value = [[t.weight, t.order, t.side] for t in value]
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_SCALAR_KEYS = {
    "family": str,
    "a": float,
    "b": float,
    "coefficient": float,
    "alpha": float,
    "weight": float,
    "side": str,
    "k": int,
    "scheme": str,
    "tolerance": float,
    "trend_tolerance": float,
    "eps": float,
    "seed": int,
    "angles": int,
    "vectors": int,
}
_LIST_KEYS = {"sizes", "p_list", "checks", "terms"}
_COEFF_RE = re.compile(r"^c([0-9]+)$")


def _known_key(key: str) -> bool:
    return key in _SCALAR_KEYS or key in _LIST_KEYS or _COEFF_RE.match(key) is not None


def _parse_complex(text: str, line: int, col: int) -> complex:
    cleaned = text.replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise ParseError(f"cannot parse complex value {text!r}", line, col) from None


def _split_list(value: str) -> list:
    value = value.strip()
    if value.startswith("[") and value.endswith("]"):
        value = value[1:-1]
    return [item.strip() for item in value.split(",") if item.strip()]


def _raw_pairs(text: str) -> dict:
    """Scan key = value lines, recording (value, line, column-of-value)."""
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        body = stripped.strip()
        if body.startswith("[") and body.endswith("]"):
            continue  # section headers organize, keys stay global
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno, raw.index(body[0]) + 1)
        key_part, value_part = body.split("=", 1)
        key = key_part.strip()
        key_col = raw.index(key) + 1 if key and key in raw else 1
        if not key or not _KEY_RE.match(key):
            raise ParseError(f"malformed key {key_part.strip()!r}", lineno, key_col)
        if not _known_key(key):
            raise ParseError(f"unknown key {key!r}", lineno, key_col)
        if key in pairs:
            raise ParseError(f"duplicate key {key!r}", lineno, key_col)
        value = value_part.strip()
        eq_col = raw.index("=") + 1
        if not value:
            raise ParseError(f"missing value for key {key!r}", lineno, eq_col + 1)
        value_col = raw.index(value, eq_col) + 1
        pairs[key] = (value, lineno, value_col)
    return pairs


def _parse_term(text: str, line: int, col: int) -> FractionalTerm:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(
            f"fractional term {text!r} must look like weight:order:side", line, col
        )
    weight_s, order_s, side = (p.strip() for p in parts)
    try:
        weight, order = float(weight_s), float(order_s)
    except ValueError:
        raise ParseError(f"cannot parse fractional term {text!r}", line, col) from None
    if side not in ("left", "right"):
        raise ParseError(f"side must be left or right, got {side!r}", line, col)
    if order < 0:
        raise ConstraintError(f"fractional order must be >= 0, got {order}")
    _check_term_sign(weight, order, side)
    return FractionalTerm(weight, order, side)


def _check_term_sign(weight: float, order: float, side: str) -> None:
    if weight == 0:
        return
    if side == "right":
        if weight < 0:
            raise ConstraintError(
                "right-sided fractional weights must satisfy q_j >= 0"
            )
        return
    want = required_left_sign(order)
    if np.sign(weight) != want:
        raise ConstraintError(
            f"left-sided weight {weight:g} for order {order:g} violates the parity "
            f"sign rule (requires sign {want:+d})"
        )


def parse_config(text: str) -> AnalysisConfig:
    """Parse and validate configuration text, filling defaults."""
    pairs = _raw_pairs(text)
    values: dict = {}

    def take(key, caster):
        if key not in pairs:
            return None
        raw, line, col = pairs.pop(key)
        try:
            return caster(raw)
        except (ValueError, TypeError):
            raise ParseError(f"cannot parse value {raw!r} for key {key!r}", line, col) from None

    for key, caster in _SCALAR_KEYS.items():
        got = take(key, caster)
        if got is not None:
            values["order_k" if key == "k" else key] = got

    if "sizes" in pairs:
        raw, line, col = pairs.pop("sizes")
        try:
            values["sizes"] = tuple(int(s) for s in _split_list(raw))
        except ValueError:
            raise ParseError(f"sizes must be integers, got {raw!r}", line, col) from None
    if "p_list" in pairs:
        raw, line, col = pairs.pop("p_list")
        try:
            values["p_list"] = tuple(float(s) for s in _split_list(raw))
        except ValueError:
            raise ParseError(f"p_list must be numbers, got {raw!r}", line, col) from None
    if "checks" in pairs:
        raw, line, col = pairs.pop("checks")
        names = _split_list(raw)
        if names == ["all"]:
            values["checks"] = CHECK_IDS
        elif names == ["none"]:
            values["checks"] = ()
        else:
            unknown = [n for n in names if n not in CHECK_IDS]
            if unknown:
                raise ParseError(f"unknown check ids {unknown}", line, col)
            values["checks"] = tuple(names)
    if "terms" in pairs:
        raw, line, col = pairs.pop("terms")
        values["frac_terms"] = tuple(_parse_term(t, line, col) for t in _split_list(raw))

    coeff_entries = {}
    for key in sorted(k for k in pairs if _COEFF_RE.match(k)):
        j = int(_COEFF_RE.match(key).group(1))
        raw, line, col = pairs.pop(key)
        if j > _MAX_HIGHORDER:
            raise ParseError(f"coefficient order {j} above supported maximum", line, col)
        coeff_entries[j] = _parse_complex(raw, line, col)
    if coeff_entries:
        top = max(coeff_entries)
        values["diff_coeffs"] = tuple(coeff_entries.get(j, 0j) for j in range(top + 1))

    assert not pairs, f"unconsumed keys: {sorted(pairs)}"
    return _validate(values)


def _validate(values: dict) -> AnalysisConfig:
    family = values.get("family", AnalysisConfig.family)
    if family not in FAMILIES:
        raise ConstraintError(f"unknown family {family!r}, expected one of {FAMILIES}")
    config = AnalysisConfig(**values)

    if config.b <= config.a:
        raise ConstraintError(f"need b > a, got ({config.a}, {config.b})")
    if config.family != "selftest2x2":
        if any(s < 8 for s in config.sizes) or list(config.sizes) != sorted(set(config.sizes)):
            raise ConstraintError("sizes must be strictly ascending and each at least 8")
    if config.side not in ("left", "right"):
        raise ConstraintError(f"side must be left or right, got {config.side!r}")
    if config.scheme not in ("trapezoid", "grunwald"):
        raise ConstraintError(f"scheme must be trapezoid or grunwald, got {config.scheme!r}")
    if config.alpha < 0:
        raise ConstraintError(f"alpha must be >= 0, got {config.alpha}")
    if config.eps <= 0:
        raise ConstraintError(f"eps must be positive, got {config.eps}")
    if any(p < 1 for p in config.p_list):
        raise ConstraintError("every entry of p_list must be at least 1")
    if config.tolerance <= 0 or config.trend_tolerance <= 0:
        raise ConstraintError("tolerances must be positive")
    if config.angles < 8:
        raise ConstraintError(f"need at least 8 rotation angles, got {config.angles}")

    if config.family == "elliptic+frac":
        if config.coefficient <= 0:
            raise ConstraintError("elliptic coefficient must be strictly positive")
        _check_term_sign(config.weight, config.alpha, config.side)
    if config.family == "highorder":
        supplied = len(config.diff_coeffs) - 1
        k = values.get("order_k", supplied)
        if k < 1:
            raise ConstraintError("highorder family needs operator order k >= 1")
        if k < supplied:
            raise ConstraintError(
                f"operator order k={k} below the highest supplied coefficient c{supplied}"
            )
        coeffs = tuple(config.diff_coeffs) + (0j,) * (k - supplied)
        config = AnalysisConfig(**{**values, "order_k": k, "diff_coeffs": coeffs})
        for j, c in enumerate(config.diff_coeffs):
            if j >= 1 and c != 0 and np.sign(c.real) != (-1) ** j:
                raise ConstraintError(
                    f"coefficient c{j} violates the alternating rule "
                    "sign(Re c_j) = (-1)^j"
                )
        for term in config.frac_terms:
            if int(np.floor(term.order)) >= k:
                raise ConstraintError(
                    f"fractional order {term.order} must have integer part below "
                    f"the operator order {k}"
                )
            _check_term_sign(term.weight, term.order, term.side)
    return config


def validate_config(config: AnalysisConfig) -> AnalysisConfig:
    """Re-run the constraint checks, e.g. after replacing fields."""
    return _validate(_as_dict(config))


def load_config(path: str) -> AnalysisConfig:
    """Read, parse, and apply the seed environment override."""
    with open(path, "r", encoding="utf-8") as handle:
        config = parse_config(handle.read())
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ConstraintError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}")
        config = AnalysisConfig(**{**_as_dict(config), "seed": seed})
    return config


def _as_dict(config: AnalysisConfig) -> dict:
    return {f.name: getattr(config, f.name) for f in fields(config)}
