"""Regenerate the JSON fixtures shipped in ``decoteich/fixtures``."""

from pathlib import Path

import numpy as np

from decoteich import jsonio
from decoteich.farey import Rational
from decoteich.solenoid_approx import build_level, random_equivariant
from decoteich.surface import GENUS_TWO, PUNCTURED_TORUS, THRICE_PUNCTURED_SPHERE
from decoteich.universal_embed import LambdaAssignment

OUT = Path(__file__).resolve().parents[1] / "src" / "decoteich" / "fixtures"


def surface(t, values):
    return {"triangles": t.to_json(), "lambdas": dict(zip(t.edges, values))}


def main():
    OUT.mkdir(exist_ok=True)
    files = {
        "torus.json": surface(PUNCTURED_TORUS, [1.0, 1.0, 1.0]),
        "sphere.json": surface(THRICE_PUNCTURED_SPHERE, [1.0, 1.5, 0.75]),
        "genus2.json": surface(GENUS_TWO, [1.0 + 0.125 * i for i in range(len(GENUS_TWO.edges))]),
        "broken_gluing.json": {"triangles": [["0", "1", "2"], ["~0", "~1", "3"]],
                               "lambdas": {"0": 1.0, "1": 1.0, "2": 1.0, "3": 1.0}},
        "standard_assignment.json": LambdaAssignment().to_json(),
        "gamma2_transverse.json": random_equivariant(build_level(2),
                                                     np.random.default_rng(2024)).to_json(),
    }
    R = Rational
    perturbed = LambdaAssignment(overrides={
        (R(0, 1), R(1, 0)): 1.0, (R(0, 1), R(1, 1)): 1.75, (R(1, 1), R(1, 0)): 0.8,
        (R(1, 2), R(1, 1)): 0.6, (R(-1, 1), R(0, 1)): 1.9, (R(2, 1), R(1, 0)): 0.7,
    })
    files["perturbed_assignment.json"] = perturbed.to_json()
    for name, obj in files.items():
        (OUT / name).write_text(jsonio.dumps(obj) + "\n", encoding="utf-8")
        print("wrote", name)


if __name__ == "__main__":
    main()
