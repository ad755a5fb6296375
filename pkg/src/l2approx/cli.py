"""Command-line front end: one experiment per invocation, CSV + summary out.

CSV schema (all modes):

    mode,entry,lambda,min_lambda,dim_w,value_num,value_den,value_dec,target,error_dec

Rows are emitted in schedule order and runs are byte-deterministic for a
fixed configuration (random matrix sources require an explicit seed).  In
homology mode each weight produces three rows tagged homology:h0, homology:h1
and homology:h2.  In luck and harris modes the lambda column carries the
level and min_lambda carries the quotient index.  Exact fractions are always
emitted alongside decimals; the decimals are presentation-only.
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from dataclasses import dataclass, fields as dc_fields
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import census, foxhomology, limitlab, padicharris, rankfun
from .exactalg import StructuralError
from .groupcore import (GroupAlgebraElement, GroupAlgebraMatrix, GroupPresentation,
                        IDENTITY_WORD, free_reduce, word_from_string)
from .repweights import ParityError, weight_dim

MODES = ("homology", "rank", "limit", "luck", "harris")
MATRIX_SOURCES = ("fox-jacobian", "boundary-stack", "file", "random")
HARRIS_ELEMENTS = ("unipotent", "diagonal", "random")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str = ""
    entry: str = ""
    presentation: str = ""
    representation: str = ""
    weights: str = ""          # START:END:STEP
    direction: str = ""        # comma-separated positive integers
    degree: Optional[int] = None
    matrix: str = ""           # fox-jacobian | boundary-stack | file | random
    matrix_file: str = ""
    rows: Optional[int] = None
    cols: Optional[int] = None
    word_len: Optional[int] = None
    seed: Optional[int] = None
    p: Optional[int] = None
    levels: str = ""           # comma list or START:END
    quotients: str = ""        # comma list of moduli for luck mode
    element: str = ""          # harris element family
    target: str = ""           # optional rational override
    out: str = ""

    def merged_with_flags(self, other: "ExperimentConfig") -> "ExperimentConfig":
        """Overlay non-default flag values on top of this config (flags win)."""
        out = ExperimentConfig(**{f.name: getattr(self, f.name) for f in dc_fields(self)})
        for f in dc_fields(other):
            v = getattr(other, f.name)
            if v not in ("", None):
                setattr(out, f.name, v)
        return out


def parse_config_file(path: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    known = {f.name for f in dc_fields(cfg)}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line is not key=value: {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        f = next(f for f in dc_fields(cfg) if f.name == key)
        if f.type == "Optional[int]":
            setattr(cfg, key, int(value))
        else:
            setattr(cfg, key, value)
    return cfg


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="l2approx",
        description="exact rank / twisted homology / finite-quotient approximation experiments")
    ap.add_argument("--config", default=None, help="flat key=value config file; flags win on conflict")
    ap.add_argument("--mode", choices=MODES, default=None)
    ap.add_argument("--entry", default=None, help="builtin census entry name")
    ap.add_argument("--presentation", default=None, help="presentation file (with --representation)")
    ap.add_argument("--representation", default=None, help="representation file (with --presentation)")
    ap.add_argument("--weights", default=None, metavar="START:END:STEP")
    ap.add_argument("--direction", default=None, help="comma-separated weight direction, default all ones")
    ap.add_argument("--degree", type=int, default=None, choices=(0, 1, 2))
    ap.add_argument("--matrix", choices=MATRIX_SOURCES, default=None)
    ap.add_argument("--matrix-file", dest="matrix_file", default=None)
    ap.add_argument("--rows", type=int, default=None)
    ap.add_argument("--cols", type=int, default=None)
    ap.add_argument("--word-len", dest="word_len", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--p", type=int, default=None)
    ap.add_argument("--levels", default=None, help="comma list or START:END")
    ap.add_argument("--quotients", default=None, help="comma list of cyclic moduli (luck mode)")
    ap.add_argument("--element", choices=HARRIS_ELEMENTS, default=None)
    ap.add_argument("--target", default=None, help="rational comparison target")
    ap.add_argument("--out", default=None, help="CSV output path")
    return ap


def config_from_args(argv: Sequence[str]) -> ExperimentConfig:
    ns = build_arg_parser().parse_args(argv)
    flags = ExperimentConfig(**{f.name: (getattr(ns, f.name) if getattr(ns, f.name) is not None
                                         else ("" if f.type == "str" else None))
                                for f in dc_fields(ExperimentConfig)})
    if ns.config:
        return parse_config_file(ns.config).merged_with_flags(flags)
    return flags


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _parse_weights(spec: str) -> range:
    m = re.fullmatch(r"(\d+):(\d+)(?::(\d+))?", spec)
    if not m:
        raise ConfigError(f"--weights must look like START:END:STEP, got {spec!r}")
    start, end = int(m.group(1)), int(m.group(2))
    step = int(m.group(3)) if m.group(3) else 1
    if start < 1 or end < start or step < 1:
        raise ConfigError("weights range must satisfy 1 <= START <= END with STEP >= 1")
    return range(start, end + 1, step)


def _parse_levels(spec: str) -> list[int]:
    if re.fullmatch(r"\d+:\d+", spec):
        a, b = spec.split(":")
        return list(range(int(a), int(b) + 1))
    try:
        return [int(x) for x in spec.split(",")]
    except ValueError:
        raise ConfigError(f"--levels must be a comma list or START:END, got {spec!r}")


def _parse_direction(spec: str, n: int) -> tuple[int, ...]:
    if not spec:
        return (1,) * n
    try:
        out = tuple(int(x) for x in spec.split(","))
    except ValueError:
        raise ConfigError(f"--direction must be comma-separated integers, got {spec!r}")
    if len(out) != n:
        raise ConfigError(f"direction has {len(out)} entries for {n} factors")
    return out


def _fmt_lambda(lam: Sequence[int]) -> str:
    return "x".join(str(v) for v in lam)


def _dec(x) -> str:
    return f"{float(x):.12g}"


def _frac_cols(v: Fraction) -> tuple[str, str, str]:
    v = Fraction(v)
    return str(v.numerator), str(v.denominator), _dec(v)


_TERM_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)?(?:\s*\*\s*)?([A-Za-z]+)?$")


def _parse_algebra_entry(text: str, names: Sequence[str], field) -> GroupAlgebraElement:
    """Entry grammar: terms joined by + or -, each term RATIONAL, WORD,
    RATIONAL*WORD, or 1 for the identity word."""
    text = text.strip()
    if not text or text == "0":
        return GroupAlgebraElement.zero(field)
    acc: dict = {}
    chunks = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
    for chunk in chunks:
        sgn = -1 if chunk.startswith("-") else 1
        body = chunk.lstrip("+-")
        m = _TERM_RE.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ConfigError(f"cannot parse matrix term {chunk!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        word = word_from_string(m.group(2), names) if m.group(2) else IDENTITY_WORD
        acc[word] = acc.get(word, Fraction(0)) + sgn * coeff
    return GroupAlgebraElement.from_dict(field, acc)


def parse_matrix_file(path: str, names: Sequence[str], field) -> GroupAlgebraMatrix:
    """One row per line, entries separated by ';'.  See _parse_algebra_entry."""
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([_parse_algebra_entry(cell, names, field) for cell in line.split(";")])
    if not rows:
        raise ConfigError(f"matrix file {path} contains no rows")
    return GroupAlgebraMatrix.from_rows(field, rows)


def random_matrix(names: Sequence[str], field, rows: int, cols: int,
                  word_len: int, seed: int) -> GroupAlgebraMatrix:
    """Seeded random matrix: up to three terms per entry, words of bounded
    length, coefficients in {-2..2}."""
    rng = random.Random(seed)
    g = len(names)
    out = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            acc: dict = {}
            for _ in range(rng.randint(1, 3)):
                length = rng.randint(0, word_len)
                letters = []
                for _ in range(length):
                    letters.append((rng.randrange(g), rng.choice((1, -1))))
                w = free_reduce(letters)
                c = rng.choice((-2, -1, 1, 2))
                acc[w] = acc.get(w, 0) + c
            row.append(GroupAlgebraElement.from_dict(field, acc))
        out.append(row)
    return GroupAlgebraMatrix.from_rows(field, out)


def _resolve_entry(cfg: ExperimentConfig) -> census.CensusEntry:
    if cfg.entry and (cfg.presentation or cfg.representation):
        raise ConfigError("give either --entry or a --presentation/--representation pair, not both")
    if cfg.entry:
        try:
            return census.builtin_entry(cfg.entry)
        except KeyError as e:
            raise ConfigError(str(e))
    if cfg.presentation and cfg.representation:
        return census.load_entry(cfg.presentation, cfg.representation)
    raise ConfigError("an entry is required: --entry NAME or --presentation/--representation files")


def _build_matrix(cfg: ExperimentConfig, entry: census.CensusEntry) -> GroupAlgebraMatrix:
    source = cfg.matrix or "boundary-stack"
    names = entry.presentation.generator_names
    if source == "fox-jacobian":
        if entry.presentation.num_relators == 0:
            raise ConfigError("fox-jacobian source needs at least one relator")
        return foxhomology.fox_jacobian(entry.presentation, entry.field)
    if source == "boundary-stack":
        return foxhomology.boundary_stack(entry.presentation, entry.field)
    if source == "file":
        if not cfg.matrix_file:
            raise ConfigError("matrix source 'file' needs --matrix-file")
        return parse_matrix_file(cfg.matrix_file, names, entry.field)
    if source == "random":
        if cfg.seed is None:
            raise ConfigError("matrix source 'random' needs an explicit --seed")
        return random_matrix(names, entry.field, cfg.rows or 2, cfg.cols or 2,
                             cfg.word_len or 4, cfg.seed)
    raise ConfigError(f"unknown matrix source {source!r}")


def _schedule(cfg: ExperimentConfig, entry: census.CensusEntry) -> limitlab.WeightSchedule:
    if not cfg.weights:
        raise ConfigError("this mode needs --weights START:END:STEP")
    ks = _parse_weights(cfg.weights)
    direction = _parse_direction(cfg.direction, entry.rep.n)
    return limitlab.weight_schedule(direction, ks, rep=entry.rep)


def _target(cfg: ExperimentConfig, entry: Optional[census.CensusEntry],
            degree: Optional[int]) -> Optional[Fraction]:
    if cfg.target:
        return Fraction(cfg.target)
    if entry is not None and degree is not None and entry.targets is not None:
        return entry.targets[degree]
    return None


# ---------------------------------------------------------------------------
# modes
# ---------------------------------------------------------------------------

CSV_HEADER = "mode,entry,lambda,min_lambda,dim_w,value_num,value_den,value_dec,target,error_dec"


def run_experiment(cfg: ExperimentConfig) -> tuple[str, str]:
    """Execute one experiment; returns (csv_text, summary_text)."""
    if cfg.mode not in MODES:
        raise ConfigError(f"--mode must be one of {', '.join(MODES)}")
    if cfg.mode == "homology":
        return _run_homology(cfg)
    if cfg.mode == "rank":
        return _run_rank(cfg)
    if cfg.mode == "limit":
        return _run_limit(cfg)
    if cfg.mode == "luck":
        return _run_luck(cfg)
    return _run_harris(cfg)


def _run_homology(cfg: ExperimentConfig) -> tuple[str, str]:
    entry = _resolve_entry(cfg)
    sched = _schedule(cfg, entry)
    lines = [CSV_HEADER]
    summary = [f"mode: homology", f"entry: {entry.name}",
               f"h2 interpretation: {'group homology (aspherical)' if entry.aspherical else '2-complex homology'}"]
    for lam in sched.weights:
        rpt = foxhomology.homology_dims(entry.presentation, entry.rep, lam,
                                        aspherical=entry.aspherical)
        expected = entry.expected_dims(lam)
        for i, h in enumerate(rpt.dims()):
            tgt = "" if expected is None else str(expected[i])
            err = "" if expected is None else _dec(abs(h - expected[i]))
            lines.append(",".join([f"homology:h{i}", entry.name, _fmt_lambda(lam),
                                   str(min(lam)), str(rpt.d), str(h), "1", _dec(h), tgt, err]))
        summary.append(f"lambda={_fmt_lambda(lam)} d={rpt.d} dims={rpt.dims()} "
                       f"rank_j={rpt.rank_j} rank_d={rpt.rank_d}"
                       + ("" if expected is None else f" expected={expected}"))
    return "\n".join(lines) + "\n", "\n".join(summary) + "\n"


def _run_rank(cfg: ExperimentConfig) -> tuple[str, str]:
    entry = _resolve_entry(cfg)
    sched = _schedule(cfg, entry)
    a = _build_matrix(cfg, entry)
    target = _target(cfg, None, None)
    lines = [CSV_HEADER]
    summary = [f"mode: rank", f"entry: {entry.name}",
               f"matrix: {cfg.matrix or 'boundary-stack'} ({a.rows}x{a.cols})"]
    pts = []
    for lam in sched.weights:
        v = rankfun.sylvester_rank(a, entry.rep, lam)
        num, den, dec = _frac_cols(v)
        tgt = "" if target is None else str(target)
        err = "" if target is None else _dec(abs(v - target))
        lines.append(",".join(["rank", entry.name, _fmt_lambda(lam), str(min(lam)),
                               str(weight_dim(lam)), num, den, dec, tgt, err]))
        summary.append(f"lambda={_fmt_lambda(lam)} rank={v} ({_dec(v)})")
        pts.append((min(lam), v))
    if len(pts) >= limitlab.MIN_FIT_POINTS:
        try:
            fit = limitlab.convergence_fit(pts, target=target, lams=sched.weights)
            summary.append("fit:")
            summary.extend("  " + ln for ln in fit.summary().splitlines())
        except ValueError as e:
            summary.append(f"fit: skipped ({e})")
    return "\n".join(lines) + "\n", "\n".join(summary) + "\n"


def _run_limit(cfg: ExperimentConfig) -> tuple[str, str]:
    entry = _resolve_entry(cfg)
    if cfg.degree is None:
        raise ConfigError("limit mode needs --degree 0|1|2")
    sched = _schedule(cfg, entry)
    target = _target(cfg, entry, cfg.degree)
    rpt = limitlab.betti_estimate(entry.presentation, entry.rep, sched, cfg.degree,
                                  target=target, aspherical=entry.aspherical)
    lines = [CSV_HEADER]
    for pt in rpt.points:
        num, den, dec = _frac_cols(pt.value)
        tgt = "" if target is None else str(target)
        err = "" if pt.error is None else _dec(pt.error)
        lines.append(",".join(["limit", entry.name, _fmt_lambda(pt.lam), str(pt.min_lambda),
                               str(weight_dim(pt.lam)), num, den, dec, tgt, err]))
    summary = [f"mode: limit", f"entry: {entry.name}", f"degree: {cfg.degree}"]
    summary.extend(rpt.summary().splitlines())
    return "\n".join(lines) + "\n", "\n".join(summary) + "\n"


def _run_luck(cfg: ExperimentConfig) -> tuple[str, str]:
    entry = _resolve_entry(cfg)
    if not cfg.quotients:
        raise ConfigError("luck mode needs --quotients m1,m2,... (cyclic power moduli)")
    try:
        moduli = [int(x) for x in cfg.quotients.split(",")]
    except ValueError:
        raise ConfigError(f"--quotients must be a comma list of integers, got {cfg.quotients!r}")
    if any(m < 1 for m in moduli):
        raise ConfigError("quotient moduli must be positive")
    a = _build_matrix(cfg, entry)
    chain = [rankfun.cyclic_power_quotient(entry.presentation, m) for m in moduli]
    values = rankfun.luck_sequence(a, chain)
    target = Fraction(cfg.target) if cfg.target else None
    lines = [CSV_HEADER]
    summary = [f"mode: luck", f"entry: {entry.name}",
               f"matrix: {cfg.matrix or 'boundary-stack'} ({a.rows}x{a.cols})"]
    for m, q, v in zip(moduli, chain, values):
        num, den, dec = _frac_cols(v)
        tgt = "" if target is None else str(target)
        err = "" if target is None else _dec(abs(v - target))
        lines.append(",".join(["luck", entry.name, str(m), "",
                               str(q.order), num, den, dec, tgt, err]))
        summary.append(f"quotient={q.name} order={q.order} value={v} ({_dec(v)})"
                       + ("" if target is None else f" error={abs(v - target)}"))
    return "\n".join(lines) + "\n", "\n".join(summary) + "\n"


def _run_harris(cfg: ExperimentConfig) -> tuple[str, str]:
    if cfg.p is None:
        raise ConfigError("harris mode needs --p (an odd prime)")
    if not cfg.levels:
        raise ConfigError("harris mode needs --levels")
    levels = _parse_levels(cfg.levels)
    element = cfg.element or "unipotent"
    p = cfg.p
    if element == "unipotent":
        pres = GroupPresentation(("t",), ())
        images = padicharris.unipotent_element_images(p)
        a = foxhomology.boundary_stack(pres, images[0][0].field)
        label = "unipotent t-1"
    elif element == "diagonal":
        pres = GroupPresentation(("t",), ())
        images = padicharris.diagonal_element_images(p)
        a = foxhomology.boundary_stack(pres, images[0][0].field)
        label = "diagonal t-1"
    else:
        if cfg.seed is None:
            raise ConfigError("harris element 'random' needs an explicit --seed")
        pres = GroupPresentation(("u", "l"), ())
        from .exactalg import ExactMatrix, QQ
        images = [[ExactMatrix.from_rows(QQ, [[1, p], [0, 1]])],
                  [ExactMatrix.from_rows(QQ, [[1, 0], [p, 1]])]]
        a = random_matrix(pres.generator_names, QQ, 1, 1, cfg.word_len or 3, cfg.seed)
        label = f"random short-support element (seed {cfg.seed})"
    if cfg.target:
        target = Fraction(cfg.target)
    else:
        # known limit: 1 for a nonzero element, 0 for the zero element
        nonzero = any(bool(e) for e in a.entries)
        target = Fraction(1) if (a.rows == a.cols == 1 and nonzero) else None
        if a.rows == a.cols == 1 and not nonzero:
            target = Fraction(0)
    rows = padicharris.harris_sequence(a, pres, images, p, levels, target=target)
    lines = [CSV_HEADER]
    summary = [f"mode: harris", f"p: {p}", f"element: {label}",
               "level  index  value  envelope=index^(-1/3n)  error"]
    for r in rows:
        num, den, dec = _frac_cols(r.value)
        tgt = "" if target is None else str(target)
        err = "" if r.error is None else _dec(r.error)
        lines.append(",".join(["harris", element, str(r.level), str(r.index), "",
                               num, den, dec, tgt, err]))
        summary.append(f"{r.level}  {r.index}  {r.value}  {r.envelope}  "
                       f"{'' if r.error is None else r.error}")
    return "\n".join(lines) + "\n", "\n".join(summary) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = config_from_args(argv)
        csv_text, summary_text = run_experiment(cfg)
    except (ConfigError, StructuralError, ParityError, census.CensusFormatError,
            rankfun.MemoryCapError, ValueError, KeyError, OSError) as e:
        kind = type(e).__name__
        print(f"error: {kind}: {e}", file=sys.stderr)
        return 2
    if cfg.out:
        out = Path(cfg.out)
        out.write_text(csv_text)
        summary_path = out.with_suffix(out.suffix + ".summary.txt")
        summary_path.write_text(summary_text)
    else:
        sys.stdout.write(csv_text)
    sys.stdout.write(summary_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
