#!/usr/bin/env python3
"""Export n,k tables from the refractiveindex.info database (CC0) to the
optical-table CSV format read by vdw.

The database is taken from the `refidx` wheel (refidx/database.npz):

    pip download --no-deps refidx
    python3 tools/export_refidx.py path/to/database.npz data/
"""
import re
import sys
from pathlib import Path

import numpy as np

HC_EV_UM = 1.239841984  # h*c in eV*um

# output file -> list of (material, dataset, [lo_eV, hi_eV)) pieces, low to high
EXPORTS = {
    "au_ordal_hagemann.csv": [
        ("Au", "Ordal", (0.12, 0.45)),
        ("Au", "Hagemann", (0.45, 10000.5)),
    ],
    "si_franta_300k.csv": [("Si", "Franta-300K", (0.0, 1e9))],
    "sio2_fused_franta.csv": [("SiO2", "Franta", (0.0, 1e9))],
}


def piece(db, material, dataset, window):
    data = db[material][dataset]["DATA"]
    wl = np.asarray(data["wavelengths"], dtype=float)
    idx = np.asarray(data["index"], dtype=complex)
    energy = HC_EV_UM / wl
    lo, hi = window
    keep = (energy >= lo) & (energy < hi)
    order = np.argsort(energy[keep])
    return energy[keep][order], idx[keep][order]


def main():
    db = np.load(sys.argv[1], allow_pickle=True)["database"].tolist()["main"]
    out_dir = Path(sys.argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    for filename, pieces in EXPORTS.items():
        with open(out_dir / filename, "w", encoding="utf-8") as f:
            rows = []
            for material, dataset, window in pieces:
                ref = " ".join(db[material][dataset]["REFERENCES"].split())
                ref = re.sub(r"<[^>]+>", "", ref)
                f.write(f"# {material}: refractiveindex.info database main/{material}/{dataset} (CC0), "
                        f"{window[0]:g}-{window[1]:g} eV\n")
                f.write(f"#   {ref[:160]}\n")
                energy, idx = piece(db, material, dataset, window)
                rows.extend(zip(energy, idx))
            f.write("# columns: energy_eV,n,k\n")
            for e, nk in rows:
                f.write(f"{e:.7g},{nk.real:.7g},{max(nk.imag, 0.0):.7g}\n")
        print(filename, len(rows), rows[0][0], rows[-1][0])


if __name__ == "__main__":
    main()
