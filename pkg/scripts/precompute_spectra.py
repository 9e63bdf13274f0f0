"""Precompute the heavy full-map spectra used by the acceptance suite.

The full map is disorder-free, so each (sector, g, J) spectrum is a fixed
array of numbers; the largest case (L=10 at half filling, dimension 15504)
takes about an hour of dense linear algebra on a single core.  This script
fills the on-disk cache under tests/data so the test suite loads the
spectra instead of recomputing them.  Delete the .npy files and rerun to
regenerate from scratch.
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from kickedmix.basis import Mixing, SectorSpec, Species, enumerate_sector
from kickedmix.model import ModelParams
from kickedmix.stochastic import full_map_spectrum

CACHE = Path(__file__).resolve().parents[1] / "tests" / "data"


def main() -> None:
    for g, J in [(0.1, 0.4), (0.4, 0.1)]:
        for L in [10]:
            spec = SectorSpec(Species.FERMION, Mixing.JC, L=L, N=L // 2)
            basis = enumerate_sector(spec)
            t0 = time.time()
            # float32 keeps the dimension-15504 pipeline within ~2 GB; the
            # ~1e-6 eigenvalue error is far below what Thouless-time
            # extraction can resolve.
            spectrum = full_map_spectrum(
                ModelParams(spec=spec, g=g, J=J),
                basis,
                cache_dir=str(CACHE),
                dtype=np.float32,
            )
            print(
                f"L={L} g={g} J={J} dim={len(basis)} "
                f"lambda1={spectrum.lambda1:.12f} "
                f"min={spectrum.eigenvalues.min():.6f} "
                f"({time.time() - t0:.0f} s)",
                flush=True,
            )


if __name__ == "__main__":
    main()
