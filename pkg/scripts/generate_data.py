#!/usr/bin/env python3
"""Regenerate the shipped sample files under data/.

The data-point file contains closed-form curve values only; it is a
synthetic stand-in for externally digitized measurements and is labeled
as such by its name.
"""

import math
import os

from uncrel import modelio, spin

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def main() -> None:
    os.makedirs(DATA, exist_ok=True)

    modelio.save_model(
        spin.indirect_model(0.0), os.path.join(DATA, "spin_phi0_model.json")
    )
    modelio.save_model(
        spin.projective_model(0.0),
        os.path.join(DATA, "spin_phi0_projective.json"),
    )

    angles = [i * (math.pi / 2) / 8 for i in range(9)]
    lines = ["phi,quantity_id,value,uncertainty"]
    for quantity in ("eps", "eta", "lhs14_ratio", "lhs16_ratio"):
        for phi in angles:
            value = spin.reference_value(quantity, phi)
            lines.append(
                f"{format(phi, '.17g')},{quantity},{format(value, '.17g')},"
            )
    path = os.path.join(DATA, "synthetic_points.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote sample files to {os.path.abspath(DATA)}")


if __name__ == "__main__":
    main()
