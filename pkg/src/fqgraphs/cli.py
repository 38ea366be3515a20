"""Command-line entry point: ``fqgraphs <command> [options]``.

Every report is a JSON object (or CSV table for grid commands) that embeds
the fully resolved :class:`RunConfig`, so a run can be replayed from its own
output.  Exit codes: 0 ok, 2 configuration error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, fields
from typing import Any

from . import embeddings, pseudorandomness, spectrum
from .exceptions import ConfigError, FileFormatError, FqGraphError, NonRealEigenvalue, VerificationFailure
from .finite_field import Field, make_field, prime_power
from .quadratic_space import QuadraticForm
from .rng import SplitMix64

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 2, 3


@dataclass
class RunConfig:
    """Everything a command needs, in JSON-native types only.

    ``form`` is ``"identity"``, ``"twisted"`` (``diag(1, ..., 1, g)``) or an
    explicit ``{"dim": d, "gram": [[...]]}``.  ``colors`` is ``"all"`` or a
    list of element encodings.  File inputs are stored resolved (their
    parsed content), never as paths.
    """

    p: int = 3
    r: int = 1
    modulus: list[int] | None = None
    d: int = 2
    form: Any = "identity"
    colors: Any = "all"
    seed: int = 0
    format: str = "json"
    oracle_cap: int = spectrum.DENSE_CAP
    q_grid: list[int] | None = None
    samples: int = 1000
    subset_size: int | None = None
    subset: Any = None
    pattern: dict | None = None
    constant_C: float = 1.0
    lambda_scale: float = 1.0
    theoretical_lambda: bool = False
    method: str = "sum"
    k: int = 2
    n_edges: int = 1
    table: list | None = None
    expr: str | None = None
    j: Any = 1
    timing: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    # -- resolution -------------------------------------------------------------

    def fields_(self) -> list[Field]:
        """The field(s) this run covers: the q-grid if given, else (p, r, modulus)."""
        if self.q_grid:
            out = []
            for q in self.q_grid:
                p, r = prime_power(int(q))
                out.append(make_field(p, r))
            return out
        return [make_field(self.p, self.r, self.modulus)]

    def quadratic_form(self, F: Field) -> QuadraticForm:
        if self.form in ("identity", None):
            return QuadraticForm.identity(F, self.d)
        if self.form in ("twisted", "nonresidue"):
            return QuadraticForm.twisted(F, self.d)
        if isinstance(self.form, dict):
            Q = QuadraticForm.from_dict(F, self.form)
            if Q.dim != self.d:
                raise ConfigError(f"form dimension {Q.dim} differs from --d {self.d}")
            return Q
        raise ConfigError(f"unknown form {self.form!r}")

    def graph(self, F: Field) -> spectrum.ColoredCayleyGraph:
        return spectrum.ColoredCayleyGraph.build(F, self.d, self.quadratic_form(F))

    def color_list(self, F: Field) -> list[int]:
        if self.colors == "all":
            return list(range(1, F.q))
        codes = [F.decode(c).value for c in self.colors]
        if any(c == 0 for c in codes):
            raise ConfigError("color 0 is not a color (it marks uncolored pairs)")
        return codes


# -- argument parsing ---------------------------------------------------------------

def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise ConfigError(f"expected a JSON value, got {text!r}") from None


def _load_json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="RunConfig JSON file; flags given explicitly override it")
    common.add_argument("--p", type=int, help="characteristic (odd prime)")
    common.add_argument("--r", type=int, help="extension degree")
    common.add_argument("--modulus", type=_json_arg, help="defining polynomial, e.g. [1,0,1] for x^2+1")
    common.add_argument("--q-grid", help="comma-separated field orders, e.g. 5,7,9")
    common.add_argument("--d", type=int, help="dimension")
    common.add_argument("--form", help="identity | twisted | form JSON file")
    common.add_argument("--color", action="append",
                        help="color as JSON element encoding (repeatable) or 'all'")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--oracle-cap", type=int)
    common.add_argument("--timing", action="store_true", default=None,
                        help="add wall-clock timings (breaks byte-identical output)")
    common.add_argument("--dump-config", action="store_true",
                        help="print the resolved RunConfig and exit")

    parser = argparse.ArgumentParser(prog="fqgraphs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("sphere", parents=[common], help="sphere sizes and pair counts per distance")

    p = sub.add_parser("spectrum", parents=[common], help="spectra and Ramanujan verdicts per color")
    p.add_argument("--method", choices=["sum", "fft"])
    p.add_argument("--check-oracle", action="store_true",
                   help="compare with the dense eigensolver (q^d <= --oracle-cap)")

    p = sub.add_parser("certify", parents=[common], help="regular-coloring certificate")
    p.add_argument("--method", choices=["sum", "fft"])

    p = sub.add_parser("mixing", parents=[common], help="seeded expander mixing checks")
    p.add_argument("--samples", type=int)
    p.add_argument("--subset-size", type=int)
    p.add_argument("--lambda-scale", type=float, help="multiply lambda (negative controls use < 1)")
    p.add_argument("--theoretical-lambda", action="store_true", default=None,
                   help="use 2 q^((d-1)/2) instead of the computed spectral maximum")

    p = sub.add_parser("kaleido", parents=[common], help="kaleidoscopic conditions over a q-grid")
    p.add_argument("--k", type=int)
    p.add_argument("--n-edges", type=int)
    p.add_argument("--constant-C", type=float)
    p.add_argument("--pattern", help="pattern JSON file to search for in a threshold-size subset")

    p = sub.add_parser("count", parents=[common], help="embedding counts vs predictions")
    p.add_argument("--pattern", help="pattern JSON file {k, edges: [[i, j, color], ...]}")
    p.add_argument("--subset-file", help='JSON list of vertex indices or {"sample": {"size", "seed"}}')
    p.add_argument("--subset-size", type=int, help="sample a subset of this size with --seed")
    p.add_argument("--constant-C", type=float)

    p = sub.add_parser("fdist", parents=[common], help="F-distance spectra and decay constants")
    p.add_argument("--table", help='JSON file {"table": [q^d elements in vertex-index order], "j"?: ...}')
    p.add_argument("--expr", choices=sorted(spectrum.NAMED_EXPRESSIONS))
    p.add_argument("--j", type=_json_arg)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_json(fh.read())
    else:
        cfg = RunConfig()
    simple = ["p", "r", "modulus", "d", "seed", "format", "oracle_cap", "timing", "method",
              "samples", "subset_size", "lambda_scale", "theoretical_lambda", "k", "n_edges",
              "constant_C", "expr", "j"]
    for name in simple:
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if args.q_grid:
        try:
            cfg.q_grid = [int(x) for x in args.q_grid.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad --q-grid {args.q_grid!r}") from None
    if args.form:
        cfg.form = args.form if args.form in ("identity", "twisted", "nonresidue") else _load_json_file(args.form)
    if args.color:
        cfg.colors = "all" if args.color == ["all"] else [_json_arg(c) for c in args.color]
    if getattr(args, "pattern", None):
        cfg.pattern = _load_json_file(args.pattern)
    if getattr(args, "subset_file", None):
        cfg.subset = _load_json_file(args.subset_file)
    if getattr(args, "table", None):
        data = _load_json_file(args.table)
        if not isinstance(data, dict) or "table" not in data:
            raise FileFormatError('table file must be {"table": [...]}')
        cfg.table = data["table"]
        if "j" in data and args.j is None:
            cfg.j = data["j"]
    if cfg.d < 1:
        raise ConfigError("--d must be >= 1")
    return cfg


# -- commands -------------------------------------------------------------------

def cmd_sphere(cfg: RunConfig) -> dict:
    rows = []
    for F in cfg.fields_():
        G = cfg.graph(F)
        q, d = F.q, cfg.d
        for t in range(q):
            pc = G.space.pair_count(t)
            size = int(G.space.sphere_sizes[t])
            rows.append({
                "q": q, "d": d, "t": F.encode(t), "sphere_size": size,
                "pair_count": pc.count, "normalized": pc.normalized,
                "normalized_two": pc.normalized_two,
                "valency_bound_ok": None if t == 0 else
                abs(size - q ** (d - 1)) <= 2 * q ** ((d - 1) / 2),
            })
    return {"records": rows}


def cmd_spectrum(cfg: RunConfig, check_oracle: bool = False) -> dict:
    rows = []
    for F in cfg.fields_():
        G = cfg.graph(F)
        for a in cfg.color_list(F):
            rep = spectrum.full_spectrum(G, a, method=cfg.method)
            rec = rep.to_dict()
            if check_oracle:
                dense = spectrum.dense_spectrum_oracle(G, a, cap=cfg.oracle_cap)
                err = float(max(abs(x - y) for x, y in zip(dense, rep.eigenvalues)))
                rec["oracle_max_abs_diff"] = round(err, 12)
                rec["oracle_ok"] = err <= 1e-6
            rows.append(rec)
    return {"records": rows}


def _color_key(F: Field, code: int) -> list[int]:
    return F.encode(code)


def cmd_certify(cfg: RunConfig) -> dict:
    out = []
    for F in cfg.fields_():
        G = cfg.graph(F)
        cert = pseudorandomness.certify_rc(G, cfg.color_list(F), method=cfg.method)
        rec = cert.to_dict()
        for entry in rec["per_color"]:
            entry["color"] = _color_key(F, entry["color"])
        rec["q"], rec["d"] = F.q, cfg.d
        out.append(rec)
    return {"records": out}


def cmd_mixing(cfg: RunConfig) -> dict:
    out = []
    for F in cfg.fields_():
        G = cfg.graph(F)
        pairs = pseudorandomness.sample_subset_pairs(G.n, cfg.samples, cfg.seed, cfg.subset_size)
        for a in cfg.color_list(F):
            if cfg.theoretical_lambda:
                lam = spectrum.ramanujan_bound(F.q, cfg.d)
            else:
                lam = spectrum.full_spectrum(G, a, method=cfg.method).max_nontrivial
            lam *= cfg.lambda_scale
            checks = [pseudorandomness.mixing_check(G, a, B, C, lam) for B, C in pairs]
            worst = max((c.deviation / c.bound for c in checks if c.bound > 0), default=0.0)
            out.append({"q": F.q, "d": cfg.d, "color": F.encode(a), "lambda": round(lam, 12),
                        "samples": len(checks),
                        "violations": sum(not c.ok for c in checks),
                        "worst_deviation_over_bound": round(worst, 9)})
    return {"records": out}


def cmd_kaleido(cfg: RunConfig) -> dict:
    out = []
    for F in cfg.fields_():
        G = cfg.graph(F)
        rep = pseudorandomness.kaleido_conditions(G, cfg.k, cfg.n_edges, cfg.constant_C)
        rec = rep.to_dict()
        rec["sizes"] = [{"color": F.encode(c), "edges": s} for c, s in sorted(rep.sizes.items())]
        if cfg.pattern is not None:
            H = embeddings.ColoredPattern.from_dict(F, cfg.pattern)
            chk = pseudorandomness.check_containment(G, {"pattern": H}, rep.threshold_size, cfg.seed)
            rec["containment"] = chk.to_dict()
        out.append(rec)
    counts = [r["vertex_count"] for r in out]
    return {"records": out, "growth_ok": pseudorandomness.growth_ok(counts)}


def _resolve_subset(cfg: RunConfig, n: int) -> list[int]:
    spec = cfg.subset
    if spec is None:
        if cfg.subset_size is None:
            return list(range(n))
        return SplitMix64(cfg.seed).sample(n, cfg.subset_size)
    if isinstance(spec, list):
        return [int(i) for i in spec]
    if isinstance(spec, dict) and "sample" in spec:
        s = spec["sample"]
        return SplitMix64(int(s.get("seed", cfg.seed))).sample(n, int(s["size"]))
    raise FileFormatError('subset must be a list of indices or {"sample": {"size": m, "seed": s}}')


def cmd_count(cfg: RunConfig) -> dict:
    if cfg.pattern is None:
        raise ConfigError("count needs --pattern")
    out = []
    for F in cfg.fields_():
        G = cfg.graph(F)
        H = embeddings.ColoredPattern.from_dict(F, cfg.pattern)
        E = _resolve_subset(cfg, G.n)
        t0 = time.perf_counter()
        res = embeddings.count_embeddings(E, H, G, C=cfg.constant_C)
        elapsed = time.perf_counter() - t0
        lam = None
        if cfg.theoretical_lambda:
            lam = spectrum.ramanujan_bound(F.q, cfg.d)
        pred = embeddings.prediction_report(res, H, E, G, lam=lam)
        rec = {"q": F.q, "d": cfg.d, **res.to_dict(), "prediction": pred.to_dict()}
        if cfg.timing:
            rec["seconds"] = elapsed
        out.append(rec)
    return {"records": out}


def cmd_fdist(cfg: RunConfig) -> dict:
    out = []
    for F in cfg.fields_():
        if cfg.table is not None:
            table = [F.decode(v).value for v in cfg.table]
            spec = spectrum.FDistanceSpec(F, cfg.d, table, F.decode(cfg.j))
        elif cfg.expr is not None:
            spec = spectrum.FDistanceSpec.named(F, cfg.d, cfg.expr, F.decode(cfg.j))
        else:
            raise ConfigError("fdist needs --table or --expr")
        rec = spectrum.f_distance_spectrum(spec).to_dict()
        rec["j"] = F.encode(rec["j"])
        out.append(rec)
    return {"records": out}


COMMANDS = {
    "sphere": cmd_sphere, "spectrum": cmd_spectrum, "certify": cmd_certify,
    "mixing": cmd_mixing, "kaleido": cmd_kaleido, "count": cmd_count, "fdist": cmd_fdist,
}


def _verify(command: str, cfg: RunConfig, report: dict) -> None:
    recs = report["records"]
    if command == "spectrum":
        if not all(r["ramanujan_ok"] for r in recs) or not all(r.get("oracle_ok", True) for r in recs):
            raise VerificationFailure("spectral bound or oracle agreement violated")
    elif command == "sphere":
        if any(r["valency_bound_ok"] is False for r in recs):
            raise VerificationFailure("valency bound violated")
    elif command == "mixing":
        if cfg.lambda_scale >= 1 and any(r["violations"] for r in recs):
            raise VerificationFailure("expander mixing inequality violated")
    elif command == "certify":
        if not all(r["rc_ok"] for r in recs):
            raise VerificationFailure("coloring is not regularly colored")


def _flatten(rec: dict, prefix: str = "") -> dict:
    flat = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten(val, name + "."))
        elif isinstance(val, list):
            flat[name] = json.dumps(val, separators=(",", ":"))
        else:
            flat[name] = val
    return flat


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    rows = [_flatten(r) for r in report["records"]]
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    status = EXIT_OK
    try:
        cfg = resolve_config(args)
        if args.dump_config:
            stdout.write(cfg.to_json() + "\n")
            return EXIT_OK
        if args.command == "spectrum":
            body = cmd_spectrum(cfg, check_oracle=args.check_oracle)
        else:
            body = COMMANDS[args.command](cfg)
        report = {"command": args.command, "config": json.loads(cfg.to_json()), **body}
        try:
            _verify(args.command, cfg, report)
        except VerificationFailure as exc:
            report["verification_error"] = str(exc)
            status = EXIT_VERIFY
        stdout.write(render(report, cfg.format))
    except NonRealEigenvalue as exc:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_VERIFY
    except (FqGraphError, ValueError, OSError) as exc:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_CONFIG
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
