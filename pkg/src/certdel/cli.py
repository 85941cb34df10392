"""Command-line interface.

Exit codes: 0 success / accept, 2 verification reject, 1 usage or I/O error.
Randomized subcommands take ``--seed``; when omitted a seed is generated and
printed to stderr. The seed is echoed into every output.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

from . import __version__
from .bits import BitString
from .codes import get_code
from .enhanced import (
    ERROR_MODES, CiphertextBundle, alice_verify_classical, alice_verify_quantum,
    bob_answer_challenge, bob_decrypt, bob_delete_quantum, encrypt_enhanced,
    make_classical_challenge,
)
from .errors import CertDelError
from .experiments import estimate_forge_curve, forge_acceptance_closed_form, forge_curve_slope, table1_report
from .formats import (
    certificate_from_dict, certificate_to_dict, challenge_from_dict, challenge_to_dict,
    read_json, record_from_dict, record_to_dict, register_from_dict, register_to_dict,
    validate_file, write_json,
)
from .original import run_attack_trials
from .pke import keygen, load_public_key, load_secret_key
from .qubit import COMPUTATIONAL, HADAMARD, ProductRegister
from .replay import replay_all
from .rng import make_rng

EXIT_OK, EXIT_ERROR, EXIT_REJECT = 0, 1, 2


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _load_bundle(path) -> tuple[CiphertextBundle, dict]:
    data = read_json(path)
    reg = register_from_dict(data)
    if not isinstance(reg, ProductRegister) or "code" not in data:
        raise CertDelError(f"{path} is not a ciphertext bundle")
    bundle = CiphertextBundle(reg, data["code"])
    bundle.used_by = data.get("used_by")
    return bundle, data


def _save_bundle(path, bundle: CiphertextBundle, data: dict) -> None:
    meta = {k: data[k] for k in ("code", "seed") if k in data}
    write_json(path, register_to_dict(bundle._register, role="bundle",
                                      used_by=bundle.used_by, **meta))


def cmd_keygen(args) -> int:
    seed = _seed(args)
    kp = keygen(args.scheme, args.lam, make_rng(seed), m=args.plaintext_bits)
    pk = json.loads(kp.public.to_json())
    sk = json.loads(kp.secret.to_json())
    for d in (pk, sk):
        d.update(package_version=__version__, seed=seed)
    write_json(args.pk, pk)
    write_json(args.sk, sk)
    _emit({"scheme": args.scheme, "pk": args.pk, "sk": args.sk, "seed": seed})
    return EXIT_OK


def cmd_encrypt(args) -> int:
    seed = _seed(args)
    pk = load_public_key(read_json(args.pk))
    message = BitString.from_hex(args.msg, pk.plaintext_bits)
    bundle, record = encrypt_enhanced(pk, message, args.code, args.error_mode, make_rng(seed),
                                      n_errors=args.n_errors)
    write_json(args.out, register_to_dict(bundle._register, role="bundle", code=args.code,
                                          used_by=None, seed=seed))
    write_json(args.record, record_to_dict(record, seed=seed))
    _emit({"bundle": args.out, "record": args.record, "n": bundle.n, "seed": seed})
    return EXIT_OK


def cmd_decrypt(args) -> int:
    seed = _seed(args)
    sk = load_secret_key(read_json(args.sk))
    bundle, data = _load_bundle(args.bundle)
    guess = {"computational": COMPUTATIONAL, "hadamard": HADAMARD, None: None}[args.guess]
    plaintext = bob_decrypt(sk, bundle, make_rng(seed), guess=guess)
    _save_bundle(args.bundle, bundle, data)
    if args.keep:
        write_json(args.keep, register_to_dict(bundle._register, role="returned",
                                               code=bundle.code, seed=seed))
    _emit({"status": "ok" if plaintext is not None else "decode-failed",
           "plaintext_hex": None if plaintext is None else plaintext.to_hex(), "seed": seed})
    return EXIT_OK


def cmd_delete(args) -> int:
    bundle, data = _load_bundle(args.bundle)
    reg = bob_delete_quantum(bundle)
    write_json(args.out, register_to_dict(reg, role="returned", code=bundle.code,
                                          seed=data.get("seed")))
    _save_bundle(args.bundle, bundle, data)
    _emit({"returned": args.out})
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _seed(args)
    record = record_from_dict(read_json(args.record))
    returned = register_from_dict(read_json(args.returned))
    ok = alice_verify_quantum(record, returned, make_rng(seed))
    _emit({"accepted": ok, "seed": seed})
    return EXIT_OK if ok else EXIT_REJECT


def cmd_challenge(args) -> int:
    seed = _seed(args)
    record = record_from_dict(read_json(args.record))
    write_json(args.out, challenge_to_dict(make_classical_challenge(record, make_rng(seed)),
                                           seed=seed))
    _emit({"challenge": args.out, "seed": seed})
    return EXIT_OK


def cmd_respond(args) -> int:
    seed = _seed(args)
    bundle, data = _load_bundle(args.bundle)
    challenge = challenge_from_dict(read_json(args.challenge))
    cert = bob_answer_challenge(bundle, challenge, make_rng(seed))
    _save_bundle(args.bundle, bundle, data)
    write_json(args.out, certificate_to_dict(cert, seed=seed))
    _emit({"certificate": args.out, "seed": seed})
    return EXIT_OK


def cmd_verify_classical(args) -> int:
    record = record_from_dict(read_json(args.record))
    ok = alice_verify_classical(record, certificate_from_dict(read_json(args.cert)))
    _emit({"accepted": ok})
    return EXIT_OK if ok else EXIT_REJECT


def cmd_attack_original(args) -> int:
    seed = _seed(args)
    report = run_attack_trials(args.n, args.trials, seed)
    report["version"] = __version__
    _emit(report)
    return EXIT_OK


def cmd_experiment(args) -> int:
    seed = _seed(args)
    if args.suite == "table1":
        report = table1_report(trials=args.trials, seed=seed, workers=args.workers,
                               code=args.code, error_mode=args.error_mode)
        fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
        text = report.to_json() if fmt == "json" else report.to_csv()
    else:
        curve = estimate_forge_curve(args.code, [0, 1, 2, 3], args.trials, seed,
                                     error_mode=args.error_mode, workers=args.workers)
        rows = [{"e": e, "acceptance": est.value, "stderr": est.stderr,
                 "closed_form": forge_acceptance_closed_form(e, args.error_mode),
                 "halving_reference": 2.0 ** -e} for e, est in curve]
        text = json.dumps({"version": __version__, "suite": "forge-curve", "code": args.code,
                           "error_mode": args.error_mode, "trials": args.trials, "seed": seed,
                           "rows": rows, "log2_slope": forge_curve_slope(curve)}, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_replay(args) -> int:
    checks = replay_all(args.seed or 0)
    for label, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
    code = get_code("bch-31-16-7")
    print(f"info  computed BCH(31,16,7) parity for the toy ciphertext: "
          f"{code.encode(BitString.from_str('1000100110101011'))[16:].grouped()}")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_ERROR


def cmd_validate(args) -> int:
    bad = False
    for path in args.paths:
        diags = validate_file(path)
        if diags:
            bad = True
            for d in diags:
                print(f"ERROR {d}")
        else:
            print(f"OK    {path}")
    return EXIT_ERROR if bad else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="certdel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"certdel {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def seeded(sp):
        sp.add_argument("--seed", type=int, default=None)
        return sp

    sp = seeded(sub.add_parser("keygen", help="generate a toy PKE key pair"))
    sp.add_argument("--scheme", default="toy-16")
    sp.add_argument("--lambda", dest="lam", type=int, default=128)
    sp.add_argument("--plaintext-bits", type=int, default=None)
    sp.add_argument("--pk", required=True)
    sp.add_argument("--sk", required=True)
    sp.set_defaults(func=cmd_keygen)

    sp = seeded(sub.add_parser("encrypt", help="Alice: build a bundle and her record"))
    sp.add_argument("--pk", required=True)
    sp.add_argument("--msg", required=True, help="plaintext as MSB-first hex")
    sp.add_argument("--code", default="bch-31-16-7")
    sp.add_argument("--error-mode", choices=ERROR_MODES, default="bloch")
    sp.add_argument("--n-errors", type=int, default=None)
    sp.add_argument("--out", required=True)
    sp.add_argument("--record", required=True)
    sp.set_defaults(func=cmd_encrypt)

    sp = seeded(sub.add_parser("decrypt", help="Bob: measure, decode and decrypt"))
    sp.add_argument("--sk", required=True)
    sp.add_argument("--bundle", required=True)
    sp.add_argument("--guess", choices=("computational", "hadamard"), default=None)
    sp.add_argument("--keep", default=None, help="also write the collapsed register here")
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("delete", help="Bob: return the register as a certificate")
    sp.add_argument("--bundle", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_delete)

    sp = seeded(sub.add_parser("verify", help="Alice: check a returned register"))
    sp.add_argument("--record", required=True)
    sp.add_argument("--returned", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = seeded(sub.add_parser("challenge", help="Alice: issue classical-certificate bases"))
    sp.add_argument("--record", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_challenge)

    sp = seeded(sub.add_parser("respond", help="Bob: measure in the challenge bases"))
    sp.add_argument("--bundle", required=True)
    sp.add_argument("--challenge", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_respond)

    sp = sub.add_parser("verify-classical", help="Alice: check a classical certificate")
    sp.add_argument("--record", required=True)
    sp.add_argument("--cert", required=True)
    sp.set_defaults(func=cmd_verify_classical)

    sp = seeded(sub.add_parser("attack-original", help="run the conjugate-coding attack"))
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--trials", type=int, default=1000)
    sp.set_defaults(func=cmd_attack_original)

    sp = seeded(sub.add_parser("experiment", help="Monte Carlo report"))
    sp.add_argument("--suite", choices=("table1", "forge-curve"), default="table1")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--code", default="bch-31-16-7")
    sp.add_argument("--error-mode", choices=ERROR_MODES, default="bloch")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"), default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_experiment)

    sp = seeded(sub.add_parser("replay-paper-examples", help="replay the worked examples"))
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("validate", help="check artifact files without modifying them")
    sp.add_argument("paths", nargs="+")
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CertDelError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
