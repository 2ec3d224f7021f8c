"""Command line front end: ``orbitcert {certify,spectrum,elevate,verify,batch}``.

Exit codes: 0 certificate (or passing verification), 2 reachable,
3 inconclusive, 4 verification failed, 1 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .certificate import Certificate, Inconclusive, ReachableWitness, outcome_from_json
from .certify import CertifyConfig, certify, certify_all
from .elevate import DEFAULT_CAP, ElevationTooLarge, elevate_matrix
from .instance import InstanceError, OrbitInstance, load_instance
from .oracle import DEFAULT_HORIZON, verify_certificate
from .predicate import format_predicate, smtlib_query
from .ratmat import DimensionError, fraction_str
from .spectral import spectrum

EXIT_OK, EXIT_ERROR, EXIT_REACHABLE, EXIT_INCONCLUSIVE, EXIT_VERIFY_FAILED = 0, 1, 2, 3, 4

log = logging.getLogger("orbitcert")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _config(args) -> CertifyConfig:
    return CertifyConfig(horizon=args.horizon, elevation_cap=args.elevation_cap,
                         emit_all=getattr(args, "all", False))


def _outcome_code(out) -> int:
    if isinstance(out, ReachableWitness):
        return EXIT_REACHABLE
    if isinstance(out, Inconclusive):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cert_text(cert: Certificate, rep) -> list[str]:
    p = cert.provenance
    lines = [f"index: {cert.index}", f"set: {format_predicate(cert.set)}", f"case: {p.get('case')}"]
    if "eigenvalue" in p:
        ev = p["eigenvalue"]
        lines.append(f"eigenvalue: {ev:.6g}" if isinstance(ev, float) else f"eigenvalue: {ev}")
    if p.get("elevation"):
        lines.append(f"elevation degree: {p['elevation']}")
    if "threshold_index" in p:
        lines.append(f"index with threshold |F(Y)|: {p['threshold_index']}")
    if "ratio" in p:
        lines.append(f"|F(X)|/|F(Y)|: {p['ratio']:.6g}")
    if "polynomial" in p:
        lines.append("top form along the orbit: " + " + ".join(f"({c})*n^{i}" for i, c in enumerate(p["polynomial"])))
    lines.append(f"verification: {'passed' if rep.passed else 'FAILED'} ({rep.tail_detail}; "
                 f"explicitly checked to n = {rep.condition2_checked_to})")
    return lines


def _plots(inst, cert, plot_dir, stem) -> list[str]:
    from . import plotting

    out = [str(plotting.plot_certificate(inst, cert, Path(plot_dir) / f"{stem}-certificate.png"))]
    if inst.dim == 2 or (inst.dim == 3 and inst.X[2] == 1 and inst.A.rows[2] == (0, 0, 1)):
        out.append(str(plotting.plot_orbit_2d(inst, Path(plot_dir) / f"{stem}-orbit.png", cert=cert)))
    return out


def _load(args) -> OrbitInstance:
    inst = load_instance(args.instance, args.affine or None)
    if args.elevation_cap < inst.dim:
        raise ValueError(f"--elevation-cap {args.elevation_cap} is below the matrix dimension {inst.dim}")
    return inst


def cmd_certify(args) -> int:
    inst = _load(args)
    cfg = _config(args)
    out = certify_all(inst, cfg) if args.all else certify(inst, cfg)
    certs = out if isinstance(out, list) else [out] if isinstance(out, Certificate) else []
    reports = [verify_certificate(inst, c, cfg.horizon) for c in certs]
    if any(not r.passed for r in reports):
        # never print a certificate the oracle rejects
        print(_dump({"outcome": "verification-failed", "reports": [r.to_json() for r in reports]}))
        return EXIT_VERIFY_FAILED
    figures = []
    if args.plot_dir:
        stem = Path(args.instance).stem
        if certs:
            figures = _plots(inst, certs[0], args.plot_dir, stem)
        elif inst.dim == 2:
            from .plotting import plot_orbit_2d

            figures = [str(plot_orbit_2d(inst, Path(args.plot_dir) / f"{stem}-orbit.png"))]
    if args.format == "json":
        if certs:
            body = [dict(c.to_json(), verification=r.to_json()) for c, r in zip(certs, reports)]
            doc = {"schema": "orbitcert/1", "outcome": "certificates", "certificates": body} if args.all else body[0]
        else:
            doc = out.to_json()
        if figures:
            doc["figures"] = figures
        print(_dump(doc))
    elif args.format == "smtlib":
        if not certs:
            print(f"; no certificate: {_short(out)}")
        for c in certs:
            print(f"; index {c.index}, case {c.provenance.get('case')}; unsat means the target is outside the set")
            print(smtlib_query(c.set, list(inst.Y)), end="")
    else:
        if not certs:
            print(_short(out))
        for i, (c, r) in enumerate(zip(certs, reports)):
            if i:
                print()
            print("outcome: certificate")
            print("\n".join(_cert_text(c, r)))
        for f in figures:
            print(f"figure: {f}")
    return _outcome_code(certs[0] if certs else out)


def _short(out) -> str:
    if isinstance(out, ReachableWitness):
        return f"outcome: reachable\nn: {out.n}"
    return f"outcome: inconclusive\nreason: {out.reason}"


def cmd_spectrum(args) -> int:
    inst = _load(args)
    rep = spectrum(inst.A, args.elevation_cap)
    if args.format == "json":
        print(_dump(rep.to_json()))
        return EXIT_OK
    print(f"dimension: {rep.matrix_dim}")
    print(f"characteristic polynomial: {rep.char_poly}")
    print(f"determinant: {fraction_str(rep.det)}")
    print(f"diagonalizable: {rep.diagonalizable}")
    print(f"categories: {', '.join(rep.categories)}")
    for g in rep.classes:
        j = g.to_json()
        where = f"~ {j['approx']:.6g}" if "approx" in j else (
            f"|lambda| ~ {j['approx_modulus']:.6g}" if "approx_modulus" in j else "")
        order = f", root of unity of order {g.modulus.unity_order}" if g.modulus.unity_order else ""
        print(f"  {g.count} x {'real' if g.real else 'complex'} {g.modulus.tag.value} {where}"
              f" (multiplicity {g.multiplicity}{order})")
    for e in rep.rational_eigen_data:
        print(f"eigenvalue {fraction_str(e.lam)}: multiplicity {e.multiplicity}, "
              f"chains of length {[c.length for c in e.chains]}")
        for c in e.chains:
            print("  chain: " + "; ".join("(" + ", ".join(fraction_str(x) for x in v) + ")" for v in c.vectors))
    if rep.elevation_used:
        print(f"elevation: degree {rep.elevation_used[0]}, basis size {rep.elevation_used[1]}, "
              f"rational eigenvalue {fraction_str(rep.elevation_eigenvalue)}")
    if rep.limitation:
        print(f"limitation: {rep.limitation}")
    return EXIT_OK


def cmd_elevate(args) -> int:
    inst = _load(args)
    E = elevate_matrix(inst.A, args.k, args.elevation_cap)
    if args.format == "json":
        print(_dump(E.to_json()))
        return EXIT_OK
    names = [f"x{i}" for i in range(inst.dim)]
    mons = [_mono(e, names) for e in E.basis.monomials]
    width = max(len(m) for m in mons)
    for m, row in zip(mons, E.matrix.rows):
        image = " + ".join(f"{fraction_str(c)}*{mons[j]}" for j, c in enumerate(row) if c) or "0"
        print(f"{m.rjust(width)} -> {image}")
    return EXIT_OK


def _mono(e, names) -> str:
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts) or "1"


def cmd_verify(args) -> int:
    inst = _load(args)
    try:
        doc = json.loads(Path(args.certificate).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON at line {exc.lineno}: {exc.msg}", "certificate") from exc
    out = outcome_from_json(doc)
    if isinstance(out, ReachableWitness):
        from .ratmat import mat_pow, mat_vec

        ok = mat_vec(mat_pow(inst.A, out.n), inst.X) == inst.Y
        print(_dump({"outcome": "reachable", "n": out.n, "holds": ok}))
        return EXIT_OK if ok else EXIT_VERIFY_FAILED
    if not isinstance(out, Certificate):
        print(_dump({"outcome": "inconclusive", "note": "nothing to verify"}))
        return EXIT_INCONCLUSIVE
    rep = verify_certificate(inst, out, args.horizon)
    if args.format == "json":
        print(_dump(rep.to_json()))
    else:
        print(f"passed: {rep.passed}")
        for k, v in rep.to_json().items():
            if k != "passed":
                print(f"  {k}: {v}")
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAILED


def _batch_row(path: str, cfg: CertifyConfig, affine) -> dict:
    t0 = time.perf_counter()
    row = {"instance": Path(path).name}
    try:
        inst = load_instance(path, affine)
        out = certify(inst, cfg)
        row.update(dim=inst.dim, ring=inst.ring)
    except (InstanceError, DimensionError, ValueError) as exc:
        row.update(outcome="error", reason=str(exc))
        out = None
    if isinstance(out, Certificate):
        row.update(outcome="certificate", case=out.provenance.get("case"), index=out.index,
                   threshold_index=out.provenance.get("threshold_index"))
    elif isinstance(out, ReachableWitness):
        row.update(outcome="reachable", case="reachable", index=out.n)
    elif isinstance(out, Inconclusive):
        row.update(outcome="inconclusive", case="inconclusive", reason=out.reason)
    row["seconds"] = round(time.perf_counter() - t0, 3)
    return row


BATCH_FIELDS = ["instance", "dim", "ring", "outcome", "case", "index", "threshold_index", "reason", "seconds"]


def cmd_batch(args) -> int:
    files = sorted(p for p in Path(args.directory).glob("*.json"))
    if not files:
        raise InstanceError(f"no *.json instances in {args.directory}")
    cfg = _config(args)
    affine = args.affine or None
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_batch_row, [str(f) for f in files], [cfg] * len(files), [affine] * len(files)))
    else:
        rows = [_batch_row(str(f), cfg, affine) for f in files]
    delim = "," if (args.summary and args.summary.endswith(".csv")) or args.format == "csv" else "\t"
    sinks = [sys.stdout]
    fh = open(args.summary, "w", newline="") if args.summary else None
    if fh:
        sinks.append(fh)
    try:
        for sink in sinks:
            w = csv.DictWriter(sink, BATCH_FIELDS, delimiter=delim, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    finally:
        if fh:
            fh.close()
    if args.plot_dir:
        from .plotting import plot_case_distribution

        p = plot_case_distribution(rows, Path(args.plot_dir) / "batch-cases.png")
        print(f"# figure: {p}", file=sys.stderr)
    return EXIT_ERROR if any(r["outcome"] == "error" for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=int, default=DEFAULT_HORIZON, help="explicit oracle horizon (default 200)")
    common.add_argument("--elevation-cap", type=int, default=DEFAULT_CAP, help="largest monomial basis to build")
    common.add_argument("--affine", action="store_true", help="matrix is d x (d+1): append the constant coordinate")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="orbitcert", description="Non-reachability certificates for linear orbits.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common], help="synthesize and verify a certificate")
    c.add_argument("instance")
    c.add_argument("--all", action="store_true", help="emit every verified certificate")
    c.add_argument("--format", choices=["json", "text", "smtlib"], default="json")
    c.add_argument("--plot-dir", help="write figures here")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalue classes, chains and elevation data")
    s.add_argument("instance")
    s.add_argument("--format", choices=["json", "text"], default="text")
    s.set_defaults(func=cmd_spectrum)

    e = sub.add_parser("elevate", parents=[common], help="action of A on monomials of degree <= k")
    e.add_argument("instance")
    e.add_argument("-k", type=int, default=2)
    e.add_argument("--format", choices=["json", "text"], default="text")
    e.set_defaults(func=cmd_elevate)

    v = sub.add_parser("verify", parents=[common], help="check a certificate file against an instance")
    v.add_argument("instance")
    v.add_argument("certificate")
    v.add_argument("--format", choices=["json", "text"], default="json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("batch", parents=[common], help="certify every *.json in a directory")
    b.add_argument("directory")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--summary", help="also write the table here (.csv for commas, else tabs)")
    b.add_argument("--format", choices=["tsv", "csv"], default="tsv")
    b.add_argument("--plot-dir", help="write the case-distribution figure here")
    b.set_defaults(func=cmd_batch)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.horizon < 1:
        parser.error("--horizon must be at least 1")
    try:
        return args.func(args)
    except (InstanceError, DimensionError, ElevationTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
