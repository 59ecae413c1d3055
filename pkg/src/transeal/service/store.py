"""File-backed state for the sealing service.

Everything lives under one data directory in small, rewriteable files:

    state.json        registry of translators, court directory, CA counters
    anchors.xml       the published trust anchors
    revocations.xml   the revocation registry
    keys/             one-line key seed files (never served)
    certs/, acs/      certificate and attribute-certificate XML
    seals/            every issued seal, by target digest

Writes go through a temp file + rename so a crash never leaves a
half-written state file.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from ..pki import KeyPair, read_key_file, write_key_file

__all__ = ["ServiceStore"]


class ServiceStore:
    def __init__(self, data_dir: str | os.PathLike):
        self.root = Path(data_dir)
        for sub in ("keys", "certs", "acs", "seals"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # -- atomic primitives --------------------------------------------------

    def _write_atomic(self, path: Path, data: bytes, *, mode: int | None = None) -> None:
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            if mode is not None:
                os.chmod(tmp, mode)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def write_bytes(self, name: str, data: bytes) -> None:
        self._write_atomic(self.root / name, data)

    def read_bytes(self, name: str) -> bytes | None:
        path = self.root / name
        return path.read_bytes() if path.exists() else None

    def delete(self, name: str) -> None:
        path = self.root / name
        if path.exists():
            path.unlink()

    def exists(self, name: str) -> bool:
        return (self.root / name).exists()

    # -- typed helpers ------------------------------------------------------

    def read_state(self) -> dict:
        raw = self.read_bytes("state.json")
        return json.loads(raw) if raw else {}

    def write_state(self, state: dict) -> None:
        data = json.dumps(state, indent=2, sort_keys=True).encode()
        self._write_atomic(self.root / "state.json", data + b"\n")

    def write_key(self, name: str, key_pair: KeyPair) -> None:
        path = self.root / "keys" / f"{name}.key"
        write_key_file(path, key_pair)
        os.chmod(path, 0o600)

    def read_key(self, name: str) -> KeyPair:
        return read_key_file(self.root / "keys" / f"{name}.key")

    def has_key(self, name: str) -> bool:
        return (self.root / "keys" / f"{name}.key").exists()
