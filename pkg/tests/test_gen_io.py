import json

import numpy as np
import pytest

from minregret.core import Instance, InstanceError, describe_instance
from minregret.gen import generate_instance
from minregret.io import (
    adversary_strategy_from_dict,
    adversary_strategy_to_dict,
    instance_text,
    load_instance,
    load_marginal,
    load_strategies,
    player_strategy_from_dict,
    player_strategy_to_dict,
    save_instance,
)
from minregret.nominal import build_oracle
from minregret.solvers import solve_randomized


class TestGenerator:
    def test_tight_discrete_structure(self):
        inst = generate_instance("tight-discrete", k=5)
        assert inst.n == 5
        assert inst.nominal.k == 1
        assert np.array_equal(inst.uncertainty.costs, np.eye(5))

    def test_tight_discrete_needs_k_at_least_two(self):
        with pytest.raises(InstanceError):
            generate_instance("tight-discrete", k=1)

    def test_tight_interval_structure(self):
        inst = generate_instance("tight-interval")
        assert inst.n == 2
        assert np.array_equal(inst.uncertainty.lower, [0.0, 0.0])
        assert np.array_equal(inst.uncertainty.upper, [1.0, 1.0])

    def test_same_seed_is_byte_identical(self):
        a = generate_instance("spanning-tree", n=7, uncertainty="scenarios", n_scenarios=3, seed=11)
        b = generate_instance("spanning-tree", n=7, uncertainty="scenarios", n_scenarios=3, seed=11)
        assert instance_text(a) == instance_text(b)

    def test_different_seeds_differ(self):
        a = generate_instance("k-selection", n=6, seed=1)
        b = generate_instance("k-selection", n=6, seed=2)
        assert instance_text(a) != instance_text(b)

    @pytest.mark.parametrize("family", ["k-selection", "spanning-tree", "dag-path"])
    @pytest.mark.parametrize("kind", ["interval", "scenarios"])
    def test_generated_instances_are_valid_and_solvable(self, family, kind):
        for seed in range(4):
            inst = generate_instance(
                family, n=5 + seed, uncertainty=kind, n_scenarios=3, seed=seed
            )
            assert isinstance(inst, Instance)
            oracle = build_oracle(inst)  # graph families must be connected/reachable
            assert len(oracle.enumerate_feasible()) >= 1
            if kind == "interval":
                assert np.all(inst.uncertainty.lower <= inst.uncertainty.upper)
                assert np.all(inst.uncertainty.upper <= 10.0)
            else:
                assert inst.uncertainty.k == 3

    def test_unknown_family(self):
        with pytest.raises(InstanceError):
            generate_instance("matchings", n=4)


class TestInstanceIo:
    def test_save_load_round_trip(self, tmp_path):
        inst = generate_instance("dag-path", n=6, uncertainty="interval", seed=3)
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        again = load_instance(path)
        assert describe_instance(again) == describe_instance(inst)

    def test_load_rejects_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InstanceError):
            load_instance(path)

    def test_load_rejects_unknown_fields(self, tmp_path):
        inst = generate_instance("k-selection", n=4, seed=0)
        d = describe_instance(inst)
        d["extra"] = 1
        path = tmp_path / "x.json"
        path.write_text(json.dumps(d), encoding="utf-8")
        with pytest.raises(InstanceError, match="unknown field"):
            load_instance(path)


class TestStrategyIo:
    def test_player_round_trip(self):
        inst = generate_instance("tight-discrete", k=3)
        game = solve_randomized(inst)
        d = player_strategy_to_dict(game.player)
        y = player_strategy_from_dict(d, inst.n)
        assert [T.indices for T in y.support] == [T.indices for T in game.player.support]

    def test_adversary_round_trip_keeps_scenarios(self):
        inst = generate_instance("tight-discrete", k=3)
        game = solve_randomized(inst)
        d = adversary_strategy_to_dict(game.adversary)
        assert d["scenarios"] == [0, 1, 2]
        w = adversary_strategy_from_dict(d, inst.n)
        w.validate_for(inst)

    def test_strategies_file(self, tmp_path):
        inst = generate_instance("tight-discrete", k=2)
        game = solve_randomized(inst)
        path = tmp_path / "strat.json"
        path.write_text(
            json.dumps(
                {
                    "player": player_strategy_to_dict(game.player),
                    "adversary": adversary_strategy_to_dict(game.adversary),
                }
            ),
            encoding="utf-8",
        )
        y, w = load_strategies(path, inst)
        assert y.support_size == 2 and w.support_size == 2

    def test_strategies_file_needs_both_entries(self, tmp_path):
        inst = generate_instance("tight-discrete", k=2)
        path = tmp_path / "strat.json"
        path.write_text("{}", encoding="utf-8")
        with pytest.raises(InstanceError):
            load_strategies(path, inst)

    def test_marginal_loader_checks_length(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("[0.5, 0.5, 0.5]", encoding="utf-8")
        with pytest.raises(InstanceError):
            load_marginal(path, 2)
        path.write_text("[0.5, 0.5]", encoding="utf-8")
        assert np.allclose(load_marginal(path, 2).p, [0.5, 0.5])
