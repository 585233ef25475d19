import json
import os
from typing import Dict

from config import REPORT_CONFIG
from crystal import FCrystal
from matlat import MatrixW
from selfdual import SelfDualCrystal, generate, standard_form
from witt import RingParams


def canonical_models(p: int = 3, N: int = 32) -> Dict[str, dict]:
    """The three canonical models plus a generated instance and a two-fiber family"""
    params = RingParams.create(p, 1, N)
    q = p ** 3

    identity = FCrystal(MatrixW.identity(params, 2))
    jordan = FCrystal(MatrixW.from_rows(params, [[p, 1], [0, p]]))

    J4 = standard_form(params, 4, "symplectic")
    diagonal = SelfDualCrystal(FCrystal(MatrixW.p_power_diagonal(params, [0, 1, 2, 3])),
                               J4, params.scalar(q), "symplectic")

    # pure slope 3/2: no break at A = 1
    supersingular = MatrixW.from_rows(params, [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [-q, 0, 0, 0],
        [0, -q, 0, 0],
    ])
    generated = generate(params, 4, [0, 1, 2, 3], seed=0, mode="conjugate")

    def fiber(S: SelfDualCrystal) -> dict:
        return {"matrix": S.A.to_literal(), "form": S.G.to_literal(), "c": S.c.to_literal()}

    family = {
        "shared": {"p": p, "a": 1, "N": N, "n": 4, "kind": "symplectic", "breakpoint": [1, 0]},
        "fibers": [
            fiber(diagonal),
            fiber(generated),
            fiber(SelfDualCrystal(FCrystal(supersingular), J4, params.scalar(q), "symplectic")),
        ],
    }
    return {
        "identity": identity.to_dict(),
        "jordan": jordan.to_dict(),
        "diagonal_symplectic": diagonal.to_dict(),
        "generated_symplectic": generated.to_dict(),
        "family": family,
    }


def populate_models(directory: str = "models", p: int = 3, N: int = 32):
    """Write the canonical model files as JSON"""
    os.makedirs(directory, exist_ok=True)
    print(f"Writing canonical models to {directory}/ ...")
    for name, model in canonical_models(p, N).items():
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w") as f:
            f.write(json.dumps(model, indent=REPORT_CONFIG["indent"]) + "\n")
        print(f"  ✅ {path}")
    print("Canonical models written successfully!")


if __name__ == "__main__":
    populate_models()
