"""Flat ``key = value`` run configuration with dotted keys.

Example::

    model.x = 100
    model.gamma = 0.75
    payoff.kind = call
    payoff.strike = 100
    n_paths = 100000
    n_steps = 256
    master_seed = 42
    methods = malliavin, fd-central

Blank lines and lines starting with ``#`` are ignored.
"""

from dataclasses import dataclass, field
from typing import Optional

from .greeks import Payoff
from .model import ModelParams

MODEL_KEYS = tuple(f"model.{name}" for name in ("x", "nu0", "r", "kappa", "mu", "theta", "gamma", "rho", "T"))
REQUIRED_KEYS = MODEL_KEYS + ("n_paths", "n_steps", "master_seed")
CONFIG_METHODS = ("malliavin", "fd-central", "analytic-oracle")
OPTIONAL_KEYS = (
    "payoff.kind",
    "payoff.strike",
    "methods",
    "bump_h_x",
    "bump_h_r",
    "eps_study_list",
    "eps_study_scale",
    "eps_num",
    "antithetic",
    "output_path",
    "threads",
    "report_timing",
    "deriv.checks",
    "deriv.n_paths",
    "deriv.n_r_indices",
    "deriv.r_indices",
    "deriv.delta_bump",
    "dump.path_index",
    "dump.eps",
    "dump.with_ou",
)


class ConfigParse(ValueError):
    def __init__(self, message, key=None):
        self.key = key
        super().__init__(message)


@dataclass
class RunConfig:
    model: ModelParams
    payoff: Payoff
    n_paths: int
    n_steps: int
    master_seed: int
    methods: tuple = ("malliavin",)
    bump_h_x: Optional[float] = None
    bump_h_r: Optional[float] = None
    eps_study_list: tuple = ()
    output_path: Optional[str] = None
    threads: object = 1
    eps_num: Optional[float] = None
    antithetic: bool = False
    report_timing: bool = False
    deriv_checks: tuple = (("sigma_T", "W"), ("nu_T", "W"), ("X_T", "W_hat"))
    deriv_n_paths: int = 20
    deriv_n_r_indices: int = 50
    deriv_r_indices: Optional[tuple] = None
    deriv_delta_bump: float = 1e-5
    dump_path_index: int = 0
    dump_eps: Optional[float] = None
    dump_with_ou: bool = False
    raw: dict = field(default_factory=dict, repr=False)


def parse_lines(text):
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigParse(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise ConfigParse(f"line {lineno}: unknown key {key!r}", key)
        if key in values:
            raise ConfigParse(f"line {lineno}: duplicate key {key!r}", key)
        values[key] = value
    return values


def _convert(values, key, kind):
    try:
        return kind(values[key])
    except ValueError as exc:
        raise ConfigParse(f"{key}: cannot parse {values[key]!r} ({exc})", key) from None


def _float_list(values, key):
    raw = values.get(key, "")
    try:
        return tuple(float(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise ConfigParse(f"{key}: expected comma-separated numbers, got {raw!r}", key) from None


def _bool(text):
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text):
    return int(text, 0)


def build_config(values, seed_override=None):
    missing = [k for k in REQUIRED_KEYS if k not in values and not (k == "master_seed" and seed_override is not None)]
    if missing:
        raise ConfigParse(f"missing required key {missing[0]!r}", missing[0])
    model = ModelParams(**{k.split(".", 1)[1]: _convert(values, k, float) for k in MODEL_KEYS})
    try:
        payoff = Payoff(values.get("payoff.kind", "call"), float(values.get("payoff.strike", "0")))
    except ValueError as exc:
        raise ConfigParse(f"payoff: {exc}", "payoff.kind") from None
    methods = tuple(m.strip() for m in values.get("methods", "malliavin").split(",") if m.strip())
    for m in methods:
        if m not in CONFIG_METHODS:
            raise ConfigParse(f"methods: unknown method {m!r}; expected subset of {CONFIG_METHODS}", "methods")

    cfg = RunConfig(
        model=model,
        payoff=payoff,
        n_paths=_convert(values, "n_paths", _int),
        n_steps=_convert(values, "n_steps", _int),
        master_seed=seed_override if seed_override is not None else _convert(values, "master_seed", _int),
        methods=methods,
        raw=dict(values),
    )
    if cfg.n_paths < 1 or cfg.n_steps < 1:
        raise ConfigParse("n_paths and n_steps must be >= 1", "n_paths" if cfg.n_paths < 1 else "n_steps")
    if not 0 <= cfg.master_seed < 2**64:
        raise ConfigParse("master_seed must be an unsigned 64-bit integer", "master_seed")

    for key, attr, kind in (
        ("bump_h_x", "bump_h_x", float),
        ("bump_h_r", "bump_h_r", float),
        ("eps_num", "eps_num", float),
        ("antithetic", "antithetic", _bool),
        ("report_timing", "report_timing", _bool),
        ("output_path", "output_path", str),
        ("deriv.n_paths", "deriv_n_paths", _int),
        ("deriv.n_r_indices", "deriv_n_r_indices", _int),
        ("deriv.delta_bump", "deriv_delta_bump", float),
        ("dump.path_index", "dump_path_index", _int),
        ("dump.eps", "dump_eps", float),
        ("dump.with_ou", "dump_with_ou", _bool),
    ):
        if key in values:
            setattr(cfg, attr, _convert(values, key, kind))

    if "threads" in values:
        cfg.threads = "auto" if values["threads"] == "auto" else _convert(values, "threads", _int)

    eps = _float_list(values, "eps_study_list")
    scale = values.get("eps_study_scale", "absolute")
    if scale == "sigma0":
        eps = tuple(e * model.sigma0 for e in eps)
    elif scale != "absolute":
        raise ConfigParse(f"eps_study_scale must be 'absolute' or 'sigma0', got {scale!r}", "eps_study_scale")
    if any(e <= 0 for e in eps):
        raise ConfigParse("eps_study_list entries must be positive", "eps_study_list")
    if list(eps) != sorted(eps, reverse=True):
        raise ConfigParse("eps_study_list must be sorted in descending order", "eps_study_list")
    cfg.eps_study_list = eps

    if "deriv.checks" in values:
        checks = []
        for item in values["deriv.checks"].split(","):
            if not item.strip():
                continue
            quantity, _, brownian = item.strip().partition(":")
            if not brownian:
                raise ConfigParse(f"deriv.checks: expected quantity:brownian, got {item.strip()!r}", "deriv.checks")
            checks.append((quantity.strip(), brownian.strip()))
        cfg.deriv_checks = tuple(checks)
    if "deriv.r_indices" in values:
        cfg.deriv_r_indices = tuple(int(r) for r in _float_list(values, "deriv.r_indices"))
    return cfg


def load_config(path, seed_override=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParse(f"cannot read config {path!r}: {exc}") from None
    return build_config(parse_lines(text), seed_override)
