"""Run configuration: INI parsing, assumption gates and model assembly.

A config file has sections ``[run]``, ``[model]``, ``[hs]`` (Hamiltonian
runs), ``[flow]``, ``[solve]`` and ``[check]``.  Every structural assumption of
the two problems maps to one gate in ``ASSUMPTION_GATES``; a violated gate
raises ``ConfigError`` carrying the assumption label.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .functionals import (
    EnergyModel,
    SeparableDensity,
    ScalarNonlinearity,
    check_growth,
    make_density,
    make_scalar,
)
from .minimax import FlowConfig
from .spectral import DomainSpec, build_basis
from .splitting import build_es_split, build_hs_split

__all__ = ["RunConfig", "ConfigError", "load_config", "parse_config", "build_model", "ASSUMPTION_GATES"]


class ConfigError(ValueError):
    """Invalid configuration; ``label`` names the violated assumption."""

    def __init__(self, label: str, message: str):
        super().__init__(f"{label}: {message}")
        self.label = label


# label -> how it is enforced
ASSUMPTION_GATES = {
    "(V1)": "potential is a constant shift V0, continuous by construction",
    "(V2)": "-V0 must not be a Dirichlet eigenvalue of the domain (all modes, not only retained ones)",
    "(H1)": "catalogued densities are C1 and time independent, hence T-periodic",
    "(H2)": "sampled: H(0) = 0 and |H_z|/|z| -> 0 at the origin",
    "(H3)": "sampled: H > 0 away from 0 and H/|z|^2 grows without bound",
    "(H4)": "sampled: H~ >= a1|z|^2 and (|H_z|/|z|)^sigma <= a2 H~ for |z| >= R; sigma > 1 (N=1) or > N/2+1",
    "(E1)": "p, q > 2 with 1/p + 1/q > 1 - 2/N (and the N >= 5 restriction); s + t = 2 with 1/p > 1/2 - s/N, 1/q > 1/2 - t/N",
    "(E2)": "sampled: f(u)/u -> 0 at the origin",
    "(E3)": "sampled: F(u)/u^2 grows without bound",
    "(E4)": "sampled: f(u)/|u| nondecreasing on each half-line (not machine-provable, checked on a grid)",
    "(E5)": "sampled: f odd",
    "even": "H(-z) = H(z) (needed for the symmetric minimax)",
    "debug": "model ZERO suppresses the nonlinear part and bypasses the (E)/(H) gates",
}


@dataclass
class RunConfig:
    problem: str = "ES"
    domain: str = "interval"
    lengths: tuple = (math.pi,)
    N: int = 32
    oversample: int = 8
    seed: int = 0
    # elliptic system
    s: float = 1.0
    t: float = 1.0
    # Hamiltonian system
    V0: float = 0.5
    T: float = 2.0 * math.pi
    K: int = 7
    # model
    model: str = "POWER"
    model_g: str = ""
    params: dict = field(default_factory=lambda: {"p": 4.0, "q": 4.0})
    k_list: tuple = (0, 2, 4)
    beta_kmax: int = 16
    flow: FlowConfig = field(default_factory=FlowConfig)
    mutation: str = "none"
    out: str = "out"

    def to_dict(self):
        d = asdict(self)
        d["lengths"] = list(self.lengths)
        d["k_list"] = list(self.k_list)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["lengths"] = tuple(d["lengths"])
        d["k_list"] = tuple(d["k_list"])
        d["flow"] = FlowConfig(**d["flow"])
        return cls(**d)

    # -- assumption gates -------------------------------------------------

    def domain_spec(self) -> DomainSpec:
        return DomainSpec(self.domain, tuple(self.lengths))

    def validate(self):
        if self.problem not in ("ES", "HS"):
            raise ConfigError("problem", f"unknown problem {self.problem!r}")
        try:
            dom = self.domain_spec()
        except ValueError as exc:
            raise ConfigError("domain", str(exc)) from None
        if self.N < 1:
            raise ConfigError("truncation", "N must be >= 1")
        if any(k < 0 for k in self.k_list):
            raise ConfigError("k_list", "indices must be nonnegative")
        if self.mutation not in ("none", "es_projector_sign"):
            raise ConfigError("mutation", f"unknown mutation hook {self.mutation!r}")
        ndim = dom.dim
        if self.problem == "ES":
            self._validate_es(ndim)
        else:
            self._validate_hs(dom)
        return self

    def _validate_es(self, ndim):
        s, t = self.s, self.t
        if not math.isclose(s + t, 2.0, abs_tol=1e-12) or not (s >= t > 0):
            raise ConfigError("(E1)", f"need s + t = 2 and s >= t > 0, got s={s}, t={t}")
        try:
            f, g = self.scalar_models()
        except ValueError as exc:
            raise ConfigError("(E1)", str(exc)) from None
        if f.name == "ZERO" and g.name == "ZERO":
            return  # debug model: nonlinear part suppressed, gates do not apply
        for nl, label in ((f, "f"), (g, "g")):
            if not nl.satisfies_assumptions:
                raise ConfigError("(E2)", f"{label} = {nl.name} is not superquadratic at the origin")
        p, q = f.growth, g.growth
        if not (p > 2 and q > 2):
            raise ConfigError("(E1)", f"growth exponents must exceed 2 (p={p}, q={q})")
        if not 1 / p + 1 / q > 1 - 2 / ndim:
            raise ConfigError("(E1)", f"1/p + 1/q > 1 - 2/N fails for p={p}, q={q}, N={ndim}")
        if ndim >= 5 and not (1 / p > 0.5 - 2 / ndim and 1 / q > 0.5 - 2 / ndim):
            raise ConfigError("(E1)", "N >= 5 restriction on p, q fails")
        if not (1 / p > 0.5 - s / ndim and 1 / q > 0.5 - t / ndim):
            raise ConfigError("(E1)", f"embedding condition 1/p > 1/2 - s/N fails for s={s}, t={t}")
        for nl, label in ((f, "f"), (g, "g")):
            self._sample_scalar(nl, label)

    @staticmethod
    def _sample_scalar(nl: ScalarNonlinearity, label):
        u = np.concatenate([-np.logspace(-6, 4, 400)[::-1], np.logspace(-6, 4, 400)])
        F, fu, _ = nl.evaluate(u)
        Fm, fm, _ = nl.evaluate(-u)
        if not np.array_equal(fm, -fu):
            raise ConfigError("(E5)", f"{label} is not odd")
        pos = u > 0
        ratio = fu[pos] / u[pos]
        if not (ratio[0] < 1e-3 * max(ratio[-1], 1.0)):
            raise ConfigError("(E2)", f"{label}(u) is not o(u) at the origin")
        if np.any(np.diff(ratio) < -1e-12 * np.abs(ratio[1:])):
            raise ConfigError("(E4)", f"{label}(u)/|u| is not nondecreasing")
        q = F[pos] / u[pos] ** 2
        if not (q[-1] > 10 * q[len(q) // 2] and np.all(F >= 0)):
            raise ConfigError("(E3)", f"F/u^2 of {label} does not grow without bound")

    def _validate_hs(self, dom):
        if self.K < 0:
            raise ConfigError("truncation", "temporal cutoff K must be >= 0")
        if not self.T > 0:
            raise ConfigError("(H1)", "period must be positive")
        # -V0 must avoid the whole Dirichlet spectrum, not only the retained part
        if self.V0 < 0:
            top = int(math.ceil(math.sqrt(-self.V0) * max(dom.lengths) / math.pi)) + 1
            grids = np.meshgrid(*[np.arange(1, top + 1)] * dom.dim, indexing="ij")
            lam = sum((g.ravel() * math.pi / ell) ** 2 for g, ell in zip(grids, dom.lengths))
            if np.any(np.isclose(lam, -self.V0, rtol=1e-12, atol=1e-12)):
                raise ConfigError("(V2)", f"0 is in the spectrum of -Laplace + V0 for V0={self.V0}")
        try:
            dens = self.density()
        except ValueError as exc:
            raise ConfigError("model", str(exc)) from None
        if dens.name == "ZERO":
            return  # debug model
        ndim = dom.dim
        if not (dens.sigma > 1 if ndim == 1 else dens.sigma > ndim / 2 + 1):
            raise ConfigError("(H4)", f"sigma={dens.sigma} too small for N={ndim}")
        rep = check_growth(dens, n_samples=20_000, seed=self.seed)
        for key, label in (("H2", "(H2)"), ("H3", "(H3)"), ("H4_1", "(H4)"), ("H4_2", "(H4)"), ("even", "even")):
            if not rep.checks[key]["passed"]:
                raise ConfigError(label, f"sampling certificate failed for {dens.name}")

    # -- model assembly ---------------------------------------------------

    def scalar_models(self):
        p = dict(self.params)
        name_g = self.model_g or self.model
        f = make_scalar(self.model, p=p.get("p", 4.0), growth=p.get("growth", 3.0))
        g = make_scalar(name_g, p=p.get("q", p.get("p", 4.0)), growth=p.get("growth_g", p.get("growth", 3.0)))
        return f, g

    def density(self):
        if self.problem == "ES":
            return SeparableDensity(*self.scalar_models())
        return make_density(self.model, **self.params)

    def flow_config(self) -> FlowConfig:
        return FlowConfig(**{**asdict(self.flow), "seed": self.seed})


def _floats(text):
    return tuple(float(eval_number(x)) for x in text.replace(",", " ").split())


def eval_number(text: str) -> float:
    """Parse a real number; ``pi`` and simple multiples like ``2*pi`` are accepted."""
    text = text.strip().lower().replace(" ", "")
    if "pi" in text:
        factor = text.replace("pi", "").rstrip("*") or "1"
        if "/" in factor:
            num, den = factor.split("/")
            return float(num or 1) / float(den) * math.pi
        return float(factor) * math.pi
    return float(text)


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    cfg = RunConfig()
    try:
        if cp.has_section("run"):
            r = cp["run"]
            cfg.problem = r.get("problem", cfg.problem).upper()
            cfg.domain = r.get("domain", cfg.domain).lower()
            if "lengths" in r:
                cfg.lengths = _floats(r["lengths"])
            elif cfg.domain == "rectangle":
                cfg.lengths = (math.pi, math.pi)
            cfg.N = r.getint("N", cfg.N)
            cfg.oversample = r.getint("oversample", cfg.oversample)
            cfg.seed = r.getint("seed", cfg.seed)
            cfg.s = eval_number(r.get("s", str(cfg.s)))
            cfg.t = eval_number(r.get("t", str(cfg.t)))
            cfg.out = r.get("out", cfg.out)
        if cp.has_section("hs"):
            h = cp["hs"]
            cfg.V0 = eval_number(h.get("V0", str(cfg.V0)))
            cfg.T = eval_number(h.get("T", str(cfg.T)))
            cfg.K = h.getint("K", cfg.K)
        if cp.has_section("model"):
            m = cp["model"]
            cfg.model = m.get("name", cfg.model).upper()
            cfg.model_g = m.get("name_g", "").upper()
            cfg.params = {k: eval_number(v) for k, v in m.items() if k not in ("name", "name_g")}
            if "r" in cfg.params:
                cfg.params["R"] = cfg.params.pop("r")
        elif cfg.problem == "HS":
            cfg.model, cfg.params = "LOG_QUAD", {}
        if cp.has_section("solve"):
            sv = cp["solve"]
            if "k_list" in sv:
                cfg.k_list = tuple(int(x) for x in sv["k_list"].replace(",", " ").split())
            cfg.beta_kmax = sv.getint("beta_kmax", cfg.beta_kmax)
        if cp.has_section("flow"):
            fl = cp["flow"]
            kw = {}
            for f_ in fields(FlowConfig):
                if f_.name in fl:
                    raw = fl[f_.name]
                    kw[f_.name] = fl.getboolean(f_.name) if f_.type in (bool, "bool") else type(getattr(FlowConfig(), f_.name))(eval_number(raw))
            cfg.flow = FlowConfig(**kw)
        if cp.has_section("check"):
            cfg.mutation = cp["check"].get("mutation", "none")
    except (ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("syntax", str(exc)) from None
    return cfg


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def build_model(cfg: RunConfig) -> EnergyModel:
    basis = build_basis(cfg.domain_spec(), cfg.N, oversample=cfg.oversample)
    if cfg.problem == "ES":
        split = build_es_split(basis, cfg.s, cfg.t)
    else:
        split = build_hs_split(basis, cfg.V0, cfg.T, cfg.K)
    return EnergyModel(split, cfg.density())
