"""Tests for action scoring, selection and the failover rule."""

import numpy as np
import pytest

from src.errors import ConfigurationError, InputError
from src.mitigation.scoring import (
    candidate_actions,
    mitigation_score,
    score_breakdown,
    select_action,
)
from src.mitigation.transitions import TransitionModel, estimate_transition, should_failover
from src.models.actions import (
    ACTION_RANK,
    HEALTHY,
    Action,
    ActionKind,
    BackupResource,
    DiscreteState,
)
from src.models.scenario import (
    DEFAULT_ACTION_COSTS,
    DEFAULT_IMPACT_TABLE,
    MitigatorConfig,
)
from src.models.telemetry import SystemLoad

CRITICAL = DiscreteState(3)
NODE = 0


def _all_kinds(destination: int = 1) -> list[Action]:
    return [
        Action(kind=ActionKind.NOOP, target=NODE),
        Action(kind=ActionKind.CHECKPOINT, target=NODE),
        Action(kind=ActionKind.THROTTLE_LOAD, target=NODE),
        Action(kind=ActionKind.MIGRATE_TASK, target=NODE, destination=destination),
        Action(kind=ActionKind.RESTART_NODE, target=NODE),
        Action(kind=ActionKind.FAILOVER_TO_BACKUP, target=NODE, destination=destination + 1),
    ]


def _brute_force_choice(state, actions, load, lambda1, lambda2):
    best = None
    for action in actions:
        cost = DEFAULT_ACTION_COSTS[action.kind] * (1.0 + load)
        impact = DEFAULT_IMPACT_TABLE[state][action.kind]
        key = (
            lambda1 * cost + lambda2 * impact,
            ACTION_RANK[action.kind],
            action.destination if action.destination is not None else -1,
        )
        if best is None or key < best[0]:
            best = (key, action)
    return best[1]


class TestMitigationScore:
    def test_critical_state_hand_table(self):
        cfg = MitigatorConfig()
        load = SystemLoad(value=0.8)
        expected = {
            ActionKind.NOOP: 40.0,
            ActionKind.CHECKPOINT: 27.6,
            ActionKind.THROTTLE_LOAD: 31.8,
            ActionKind.MIGRATE_TASK: 15.0,
            ActionKind.RESTART_NODE: 26.4,
            ActionKind.FAILOVER_TO_BACKUP: 14.8,
        }
        for action in _all_kinds():
            assert mitigation_score(CRITICAL, action, load, cfg) == pytest.approx(
                expected[action.kind]
            )

    def test_breakdown_parts(self):
        cfg = MitigatorConfig()
        action = Action(kind=ActionKind.CHECKPOINT, target=NODE)
        breakdown = score_breakdown(CRITICAL, action, SystemLoad(value=0.5), cfg)
        assert breakdown.resource_cost == pytest.approx(3.0)
        assert breakdown.fault_impact == 12.0
        assert breakdown.score == pytest.approx(3.0 + 2.0 * 12.0)
        assert set(breakdown.as_dict()) == {"resource_cost", "fault_impact", "score"}

    def test_no_impact_weight_prefers_noop(self):
        cfg = MitigatorConfig(lambda2=0.0)
        chosen = select_action(CRITICAL, _all_kinds(), SystemLoad(value=0.4), cfg)
        assert chosen.kind is ActionKind.NOOP

    def test_no_cost_weight_picks_lowest_impact(self):
        cfg = MitigatorConfig(lambda1=0.0)
        chosen = select_action(CRITICAL, _all_kinds(), SystemLoad(value=0.4), cfg)
        assert chosen.kind is ActionKind.FAILOVER_TO_BACKUP

    def test_missing_cost_entry(self):
        table = {k: v for k, v in DEFAULT_ACTION_COSTS.items() if k is not ActionKind.RESTART_NODE}
        cfg = MitigatorConfig(action_cost_table=table)
        with pytest.raises(ConfigurationError, match="RestartNode"):
            restart = Action(kind=ActionKind.RESTART_NODE, target=NODE)
            mitigation_score(CRITICAL, restart, SystemLoad(value=0), cfg)

    def test_missing_impact_row(self):
        cfg = MitigatorConfig()
        with pytest.raises(ConfigurationError):
            noop = Action(kind=ActionKind.NOOP, target=NODE)
            mitigation_score(DiscreteState(7), noop, SystemLoad(value=0), cfg)


class TestSelectAction:
    def test_single_candidate(self):
        only = Action(kind=ActionKind.RESTART_NODE, target=NODE)
        assert select_action(CRITICAL, [only], SystemLoad(value=0.2), MitigatorConfig()) == only

    def test_empty_candidates(self):
        with pytest.raises(InputError):
            select_action(CRITICAL, [], SystemLoad(value=0.2), MitigatorConfig())

    def test_ties_follow_kind_order_then_destination(self):
        flat = MitigatorConfig(
            action_cost_table={k: 0.0 for k in ActionKind},
            impact_table={s: {k: 0.0 for k in ActionKind} for s in range(5)},
        )
        load = SystemLoad(value=0.5)
        checkpoint = Action(kind=ActionKind.CHECKPOINT, target=NODE)
        noop = Action(kind=ActionKind.NOOP, target=NODE)
        assert select_action(CRITICAL, [checkpoint, noop], load, flat) == noop

        far = Action(kind=ActionKind.MIGRATE_TASK, target=NODE, destination=5)
        near = Action(kind=ActionKind.MIGRATE_TASK, target=NODE, destination=2)
        assert select_action(CRITICAL, [far, near], load, flat) == near

    def test_default_critical_choice_is_failover(self):
        chosen = select_action(CRITICAL, _all_kinds(), SystemLoad(value=0.8), MitigatorConfig())
        assert chosen.kind is ActionKind.FAILOVER_TO_BACKUP

    def test_matches_exhaustive_argmin(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            state = int(rng.integers(5))
            load = float(rng.uniform(0.0, 1.0))
            lambda1, lambda2 = rng.uniform(0.0, 3.0, size=2)
            if lambda1 + lambda2 == 0.0:
                continue
            pool = _all_kinds(destination=int(rng.integers(1, 6)))
            pool.append(Action(kind=ActionKind.MIGRATE_TASK, target=NODE, destination=7))
            mask = rng.uniform(size=len(pool)) < 0.7
            candidates = [a for a, keep in zip(pool, mask) if keep] or pool[:1]

            cfg = MitigatorConfig(lambda1=lambda1, lambda2=lambda2)
            chosen = select_action(DiscreteState(state), candidates, SystemLoad(value=load), cfg)
            assert chosen == _brute_force_choice(state, candidates, load, lambda1, lambda2)

    def test_argmin_invariant_under_positive_scaling(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            state = DiscreteState(int(rng.integers(5)))
            load = SystemLoad(value=float(rng.uniform(0.0, 1.0)))
            lambda1, lambda2 = rng.uniform(0.1, 3.0, size=2)
            scale = 2.0 ** int(rng.integers(-4, 5))
            base = MitigatorConfig(lambda1=lambda1, lambda2=lambda2)
            scaled = MitigatorConfig(lambda1=lambda1 * scale, lambda2=lambda2 * scale)
            assert select_action(state, _all_kinds(), load, base) == select_action(
                state, _all_kinds(), load, scaled
            )


class TestCandidateActions:
    def test_full_set_in_order(self):
        backups = [
            BackupResource(node=6, warm=False, restore_cost=5),
            BackupResource(node=4, warm=True, restore_cost=3),
        ]
        actions = candidate_actions(2, 1, destinations=[5, 3, 2], backups=backups)
        kinds = [a.kind for a in actions]
        assert kinds[:4] == [
            ActionKind.NOOP,
            ActionKind.CHECKPOINT,
            ActionKind.THROTTLE_LOAD,
            ActionKind.RESTART_NODE,
        ]
        migrations = [a.destination for a in actions if a.kind is ActionKind.MIGRATE_TASK]
        failovers = [a.destination for a in actions if a.kind is ActionKind.FAILOVER_TO_BACKUP]
        assert migrations == [3, 5]
        assert failovers == [4, 6]
        assert all(a.task == 1 and a.target == 2 for a in actions)


class TestTransitionModel:
    def test_empty_model_is_uniform(self):
        model = TransitionModel(state_count=5)
        kind = ActionKind.FAILOVER_TO_BACKUP
        for j in range(5):
            p = estimate_transition(model, CRITICAL, kind, DiscreteState(j))
            assert p == pytest.approx(0.2)

    def test_laplace_estimate(self):
        model = TransitionModel(state_count=5, prior=1.0)
        for _ in range(9):
            model.observe(CRITICAL, ActionKind.FAILOVER_TO_BACKUP, HEALTHY)
        action = Action(kind=ActionKind.FAILOVER_TO_BACKUP, target=NODE, destination=4)
        assert estimate_transition(model, CRITICAL, action, HEALTHY) == pytest.approx(10 / 14)

    def test_row_is_a_distribution(self):
        model = TransitionModel(state_count=5, prior=0.5)
        rng = np.random.default_rng(3)
        for _ in range(40):
            model.observe(CRITICAL, ActionKind.MIGRATE_TASK, DiscreteState(int(rng.integers(5))))
        total = sum(
            estimate_transition(model, CRITICAL, ActionKind.MIGRATE_TASK, DiscreteState(j))
            for j in range(5)
        )
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_observation_raises_its_estimate(self):
        model = TransitionModel(state_count=5)
        kind = ActionKind.RESTART_NODE
        before = estimate_transition(model, CRITICAL, kind, DiscreteState(1))
        model.observe(CRITICAL, kind, DiscreteState(1))
        assert estimate_transition(model, CRITICAL, kind, DiscreteState(1)) > before

    def test_counts_are_per_action_kind(self):
        model = TransitionModel(state_count=5)
        model.observe(CRITICAL, ActionKind.MIGRATE_TASK, HEALTHY)
        assert estimate_transition(model, CRITICAL, ActionKind.CHECKPOINT, HEALTHY) == 0.2


class TestShouldFailover:
    def _model(self, healthy: int, other: int) -> TransitionModel:
        model = TransitionModel(state_count=5)
        for _ in range(healthy):
            model.observe(CRITICAL, ActionKind.FAILOVER_TO_BACKUP, HEALTHY)
        for _ in range(other):
            model.observe(CRITICAL, ActionKind.FAILOVER_TO_BACKUP, DiscreteState(4))
        return model

    def test_empty_pool(self):
        assert should_failover(self._model(50, 0), CRITICAL, [], MitigatorConfig()) is None

    def test_probability_equal_to_eta_is_rejected(self):
        model = self._model(7, 3)
        # (7 + 1) / (10 + 5)
        cfg = MitigatorConfig(eta=8 / 15)
        backups = [BackupResource(node=3, restore_cost=3)]
        assert should_failover(model, CRITICAL, backups, cfg) is None
        assert should_failover(model, CRITICAL, backups, MitigatorConfig(eta=0.53)) == backups[0]

    def test_cheapest_warm_backup_wins(self):
        model = self._model(94, 1)
        # (94 + 1) / (95 + 5) = 0.95
        backups = [
            BackupResource(node=2, warm=True, restore_cost=7),
            BackupResource(node=5, warm=True, restore_cost=3),
        ]
        chosen = should_failover(model, CRITICAL, backups, MitigatorConfig(eta=0.9))
        assert chosen == backups[1]

    def test_warm_preferred_over_cheaper_cold(self):
        model = self._model(94, 1)
        backups = [
            BackupResource(node=1, warm=False, restore_cost=0),
            BackupResource(node=3, warm=True, restore_cost=3),
        ]
        chosen = should_failover(model, CRITICAL, backups, MitigatorConfig(eta=0.9))
        assert chosen.node == 3

    def test_unlearned_model_never_fails_over(self):
        backups = [BackupResource(node=3, restore_cost=3)]
        model = TransitionModel(state_count=5)
        assert should_failover(model, CRITICAL, backups, MitigatorConfig()) is None

    def test_raising_eta_never_enables_failover(self):
        rng = np.random.default_rng(11)
        backups = [BackupResource(node=2, restore_cost=1), BackupResource(node=4, restore_cost=2)]
        etas = np.linspace(0.01, 0.99, 50)
        for _ in range(30):
            model = self._model(int(rng.integers(0, 40)), int(rng.integers(0, 40)))
            picks = [
                should_failover(model, CRITICAL, backups, MitigatorConfig(eta=float(eta)))
                for eta in etas
            ]
            refused = [pick is None for pick in picks]
            # once refused, every stricter threshold refuses too
            assert refused == sorted(refused)
