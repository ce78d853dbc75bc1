"""Sweep the lock state and watch the burglary/fire trade-off move.

For every configuration of the lock-related properties the script prints
the break-in probability, the trapped-in-fire probability and the door's
impact-weighted risk, making the coupling directly visible.
"""

import itertools
from pathlib import Path

from dogwatch import LAtom, obj_risk_val, parse_model, rho

MODEL = Path(__file__).resolve().parents[1] / "models" / "smart-house.dog"


def main() -> None:
    dog, attribution = parse_model(MODEL.read_text())
    base = {p: False for p in dog.properties}
    # The inhabitant being unaware makes the fault side live at all.
    base["Inhabitant_Unaware"] = True

    print(f"{'LiL':>3} {'LH':>3} {'DiF':>3} | {'break-in':>9} "
          f"{'trapped':>9} {'door risk':>10}")
    print("-" * 45)
    for lil, lh, dif in itertools.product((False, True), repeat=3):
        config = {**base, "LiL": lil, "LH": lh, "DiF": dif}
        burglary = rho(dog, attribution, config, LAtom("TLE1"))
        trapped = rho(dog, attribution, config, LAtom("TLE2"))
        door = obj_risk_val(dog, attribution, "Door", config)
        print(f"{int(lil):>3} {int(lh):>3} {int(dif):>3} | "
              f"{burglary:>9.4f} {trapped:>9.4f} {door:>10.2f}")

    print()
    print("Locking the door (LiL=1) zeroes the unlocked-entry attack but")
    print("activates the door-stays-locked escape fault: neither extreme")
    print("of the lock is safe on both sides at once.")


if __name__ == "__main__":
    main()
