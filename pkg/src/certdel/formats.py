"""On-disk formats for registers, Alice's record, challenges and certificates.

All files are JSON with a ``format`` tag, a schema ``version`` and the
package version. Register files carry ``sim_artifact: true``: serialized
amplitudes are a simulation device and say nothing about what could be
transmitted physically.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .bits import BitString
from .codes import get_code
from .enhanced import AliceRecord, ErrorEntry
from .errors import FormatError
from .pke import load_public_key, load_secret_key
from .qubit import Basis, DenseState, ProductRegister, Qubit

SCHEMA_VERSION = 1

QREG = "certdel-qreg"
RECORD = "certdel-record"
CHALLENGE = "certdel-challenge"
CERTIFICATE = "certdel-certificate"


def _header(fmt: str, **extra) -> dict:
    out = {"format": fmt, "version": SCHEMA_VERSION, "package_version": __version__}
    out.update(extra)
    return out


def register_to_dict(state, **meta) -> dict:
    if isinstance(state, DenseState):
        data = _header(QREG, sim_artifact=True, kind="dense", n=state.n)
        data["amplitudes"] = [[float(a.real), float(a.imag)] for a in state.amplitudes]
    else:
        data = _header(QREG, sim_artifact=True, kind="product", n=len(state))
        data["qubits"] = [[q.amp0.real, q.amp0.imag, q.amp1.real, q.amp1.imag]
                          for q in state.qubits]
        data["consumed"] = list(state.consumed)
    data.update(meta)
    return data


def register_from_dict(data: dict):
    _check_header(data, QREG)
    if data.get("sim_artifact") is not True:
        raise FormatError("register file must carry sim_artifact=true")
    n = data.get("n")
    if data.get("kind") == "dense":
        amps = data.get("amplitudes")
        if not isinstance(amps, list) or len(amps) != 2 ** n:
            raise FormatError(f"dense register needs {2 ** n} amplitudes")
        return DenseState(np.array([complex(re, im) for re, im in amps]), n)
    if data.get("kind") != "product":
        raise FormatError(f"unknown register kind {data.get('kind')!r}")
    rows = data.get("qubits")
    consumed = data.get("consumed")
    if not isinstance(rows, list) or len(rows) != n:
        raise FormatError(f"expected {n} qubits, found {len(rows) if isinstance(rows, list) else 0}")
    if not isinstance(consumed, list) or len(consumed) != n:
        raise FormatError("consumed flags missing or wrong length")
    qubits = []
    for i, row in enumerate(rows):
        if len(row) != 4:
            raise FormatError(f"qubit {i}: expected 4 doubles, got {len(row)}")
        try:
            qubits.append(Qubit(complex(row[0], row[1]), complex(row[2], row[3])))
        except ValueError as exc:
            raise FormatError(f"qubit {i}: {exc}") from None
    return ProductRegister(qubits, consumed)


def record_to_dict(record: AliceRecord, **meta) -> dict:
    data = _header(RECORD, code=record.code, error_mode=record.error_mode,
                   global_basis=record.global_basis.kind,
                   codeword=str(record.codeword), ciphertext=str(record.ciphertext),
                   errors=[{"position": e.position, "value": e.value, "basis": e.basis.to_dict()}
                           for e in record.errors])
    data.update(meta)
    return data


def record_from_dict(data: dict) -> AliceRecord:
    _check_header(data, RECORD)
    try:
        errors = tuple(ErrorEntry(int(e["position"]), int(e["value"]), Basis.from_dict(e["basis"]))
                       for e in data["errors"])
        record = AliceRecord(Basis(data["global_basis"]), BitString.from_str(data["codeword"]),
                             errors, data["code"], BitString.from_str(data["ciphertext"]),
                             data.get("error_mode", "bloch"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"invalid record: {exc}") from None
    if record.global_basis.kind not in ("computational", "hadamard"):
        raise FormatError("global basis must be computational or hadamard")
    code = get_code(record.code)
    if code.encode(record.ciphertext) != record.codeword:
        raise FormatError("codeword does not encode the recorded ciphertext")
    return record


def challenge_to_dict(bases, **meta) -> dict:
    data = _header(CHALLENGE, bases=[B.to_dict() for B in bases])
    data.update(meta)
    return data


def challenge_from_dict(data: dict) -> list[Basis]:
    _check_header(data, CHALLENGE)
    return [Basis.from_dict(b) for b in data["bases"]]


def certificate_to_dict(bits: BitString, **meta) -> dict:
    data = _header(CERTIFICATE, bits=str(bits))
    data.update(meta)
    return data


def certificate_from_dict(data: dict) -> BitString:
    _check_header(data, CERTIFICATE)
    return BitString.from_str(data["bits"])


def _check_header(data, fmt: str) -> None:
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    if data.get("format") != fmt:
        raise FormatError(f"expected format {fmt!r}, found {data.get('format')!r}")
    if data.get("version") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema version {data.get('version')!r}")


def read_json(path) -> dict:
    raw = Path(path).read_bytes()
    text = raw.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode("utf-8"))
        raise FormatError(f"{path}: invalid or truncated JSON at byte offset {offset} "
                          f"({exc.msg}; file is {len(raw)} bytes)") from None


def write_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")


def validate_file(path) -> list[str]:
    """Schema, version and invariant diagnostics for one artifact; empty if clean."""
    try:
        data = read_json(path)
    except FormatError as exc:
        return [str(exc)]
    except OSError as exc:
        return [f"{path}: {exc}"]
    fmt = data.get("format") if isinstance(data, dict) else None
    try:
        if fmt == QREG:
            register_from_dict(data)
        elif fmt == RECORD:
            record_from_dict(data)
        elif fmt == CHALLENGE:
            challenge_from_dict(data)
        elif fmt == CERTIFICATE:
            certificate_from_dict(data)
        elif isinstance(data, dict) and "sk_hex" in data:
            load_secret_key(data)
        elif isinstance(data, dict) and "pk_hex" in data:
            load_public_key(data)
        else:
            return [f"{path}: unrecognised artifact (format={fmt!r})"]
    except FormatError as exc:
        return [f"{path}: {exc}"]
    except (KeyError, TypeError, ValueError) as exc:
        return [f"{path}: invariant violation: {exc}"]
    return []
