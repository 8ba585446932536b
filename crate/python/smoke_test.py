"""Smoke test for the `tcto` extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install ./crates/python`.
"""

import json
import math

import tcto


def main():
    assert abs(tcto.propulsion_power(0.0) - 168.49) < 1e-6

    lattice = tcto.weight_lattice(3, 4)
    assert len(lattice) == 15
    assert all(abs(sum(w) - 1.0) < 1e-12 for w in lattice)

    assert tcto.hv3([[0.5, 0.5, 0.5]]) == 0.125
    assert tcto.igd([[0.0, 0.0, 0.0]], [[1.0, 0.0, 0.0]]) == 1.0
    assert tcto.nondominated([[1, 1, 1], [2, 2, 2], [1, 3, 0]]) == [1, 2]
    avg, pos = tcto.friedman_ranks([[1.0, 2.0, 3.0], [1.0, 3.0, 2.0]])
    assert avg == [3.0, 1.5, 1.5] and pos == [2, 1, 1]

    names = [name for name, _, _ in tcto.instances()]
    assert names[0] == "I-(60,30)" and len(names) == 6

    cfg = json.dumps({"T": 10, "K": 5, "area_x": 200.0, "area_y": 200.0})
    env = tcto.Env(7, cfg)
    obs = env.reset(1)
    steps = 0
    done = False
    while not done:
        obs, reward, done, outcome = env.step(math.pi / 2, 5.0, 0.5)
        assert json.loads(outcome)["t"] == steps + 1
        steps += 1
    assert steps == 10
    assert len(env.devices()) == 5

    try:
        env.step(0.0, 0.0, 0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("stepping a finished episode must fail")

    print("tcto smoke test passed")


if __name__ == "__main__":
    main()
