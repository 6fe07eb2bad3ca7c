"""FCIDUMP reader and writer.

Layout written::

    &FCI NORB=4,NELEC=4,MS2=0,
     ISYM=1 /
    value  i j k l     (ij|kl), 1-based, 8-fold unique
    value  i j 0 0     h_ij, i >= j
    value  0 0 0 0     core energy

The reader also accepts the ``ORBSYM=...`` / ``&END`` header style that
other packages emit.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from qpchem.chem.integrals import CHEMIST, MO, IntegralSet


class FCIDUMPError(ValueError):
    pass


_HEADER_INT = re.compile(r"\b(NORB|NELEC|MS2)\s*=\s*(-?\d+)", re.IGNORECASE)


def fcidump_write(ints: IntegralSet, nelec: int, path: str | Path, tol: float = 0.0, ms2: int = 0) -> None:
    if ints.basis == "spin" or ints.notation != CHEMIST:
        raise ValueError("FCIDUMP holds spatial chemists'-notation integrals")
    n = ints.n_orb
    lines = [f"&FCI NORB={n},NELEC={nelec},MS2={ms2},", " ISYM=1 /"]
    fmt = "{:.17e} {:4d} {:4d} {:4d} {:4d}"
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    if k * (k + 1) // 2 + l > ij:
                        continue
                    v = ints.g[i, j, k, l]
                    if abs(v) > tol:
                        lines.append(fmt.format(v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if abs(ints.h[i, j]) > tol:
                lines.append(fmt.format(ints.h[i, j], i + 1, j + 1, 0, 0))
    lines.append(fmt.format(ints.e_nuc, 0, 0, 0, 0))
    Path(path).write_text("\n".join(lines) + "\n")


def fcidump_read(path: str | Path) -> IntegralSet:
    text = Path(path).read_text()
    match = re.search(r"(/|&END)", text, re.IGNORECASE)
    if not text.lstrip().upper().startswith("&FCI") or match is None:
        raise FCIDUMPError(f"{path}: missing '&FCI ... /' namelist header")
    header, body = text[: match.start()], text[match.end():]
    values = {k.upper(): int(v) for k, v in _HEADER_INT.findall(header)}
    if "NORB" not in values or "NELEC" not in values:
        raise FCIDUMPError(f"{path}: header lacks NORB or NELEC")
    n = values["NORB"]
    if n <= 0:
        raise FCIDUMPError(f"{path}: NORB must be positive")
    h = np.zeros((n, n))
    g = np.zeros((n,) * 4)
    e_nuc = 0.0
    for lineno, line in enumerate(body.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FCIDUMPError(f"{path}: body line {lineno}: expected 'value i j k l', got {line!r}")
        try:
            v = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(x) for x in parts[1:])
        except ValueError as err:
            raise FCIDUMPError(f"{path}: body line {lineno}: non-numeric entry {line!r}") from err
        if not all(0 <= x <= n for x in (i, j, k, l)):
            raise FCIDUMPError(f"{path}: body line {lineno}: index out of range 0..{n}")
        if i == j == k == l == 0:
            e_nuc = v
        elif k == l == 0:
            if i == 0 or j == 0:
                raise FCIDUMPError(f"{path}: body line {lineno}: malformed one-body index")
            h[i - 1, j - 1] = h[j - 1, i - 1] = v
        elif 0 in (i, j, k, l):
            # orbital energies (i 0 0 0) carry no integral content
            continue
        else:
            i, j, k, l = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in ((i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                               (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)):
                g[a, b, c, d] = v
    return IntegralSet(h=h, g=g, e_nuc=e_nuc, basis=MO, notation=CHEMIST, nelec=values["NELEC"])
