"""Loading of tensor fixture files.

A fixture is a TOML file holding, per electronic level, the quadrupole
coefficients E and D (MHz), the z-y-z Euler angles (degrees) rotating the
quadrupole eigenframe into the lab (D1, D2, b) frame, and the symmetric
Zeeman tensor M (kHz/mT) in the lab frame, plus the named in-plane field
directions used by the experiments.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.spatial.transform import Rotation

from .levels import FieldVector, TensorParams


class FixtureMissing(Exception):
    pass


@dataclass(frozen=True)
class IonFixture:
    name: str
    ground: TensorParams
    excited: TensorParams
    directions: dict[str, float]  # name -> phi_dc in radians (theta_dc = 0)

    def field(self, direction: str, B: float) -> FieldVector:
        if direction not in self.directions:
            raise KeyError(f"unknown field direction {direction!r}")
        return FieldVector(B=B, theta=0.0, phi=self.directions[direction])


def _tensor_from_table(tab: dict) -> TensorParams:
    R = Rotation.from_euler("zyz", tab["euler_deg"], degrees=True).as_matrix()
    return TensorParams(
        E=float(tab["E"]), D=float(tab["D"]), R_Q=R, M=np.array(tab["M"], dtype=float)
    )


def load_fixture(path: str | Path) -> IonFixture:
    path = Path(path)
    if not path.exists():
        raise FixtureMissing(f"fixture file not found: {path}")
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    directions = {
        k: float(np.deg2rad(v)) for k, v in data.get("directions", {}).items()
    }
    return IonFixture(
        name=data.get("meta", {}).get("material", path.stem),
        ground=_tensor_from_table(data["ground"]),
        excited=_tensor_from_table(data["excited"]),
        directions=directions,
    )


def builtin_fixture(name: str = "eu_yso") -> IonFixture:
    """Load one of the fixtures shipped with the package."""
    ref = resources.files("quadspin") / "fixtures" / f"{name}.toml"
    with resources.as_file(ref) as path:
        return load_fixture(path)
