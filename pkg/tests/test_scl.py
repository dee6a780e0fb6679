import numpy as np
import pytest

import polarkit as pk
from polarkit import Arith, StageState

from helpers import noisy_frame, replay_penalty


class TestPenaltyIncrement:
    def test_examples(self):
        assert pk.penalty_increment_1bit(2.5, 0) == 0.0
        assert pk.penalty_increment_1bit(2.5, 1) == 2.5
        assert pk.penalty_increment_1bit(0.0, 1) == 0.0
        assert pk.penalty_increment_1bit(-1.5, 0) == 1.5
        assert pk.penalty_increment_1bit(-1.5, 1) == 0.0

    def test_rejects_bad_bit(self):
        with pytest.raises(ValueError):
            pk.penalty_increment_1bit(1.0, 2)


class TestPrune:
    def test_smallest_survive(self):
        keep = pk.prune(np.array([3.0, 1.0, 2.0, 5.0]), np.arange(4),
                        np.zeros(4, dtype=np.uint8), 2)
        assert sorted(keep.tolist()) == [1, 2]

    def test_fewer_than_list_size(self):
        keep = pk.prune(np.array([3.0, 1.0, 2.0]), np.arange(3),
                        np.zeros(3, dtype=np.uint8), 4)
        assert len(keep) == 3

    def test_tie_break_lexicographic(self):
        # equal penalties: smallest (parent, bit) pairs win
        penalties = np.array([2.0, 2.0, 2.0])
        parents = np.array([1, 0, 0])
        bits = np.array([0, 1, 0], dtype=np.uint8)
        keep = pk.prune(penalties, parents, bits, 2)
        assert keep.tolist() == [2, 1]  # (0,0) then (0,1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pk.prune(np.array([]), np.array([]), np.array([]), 2)


class TestSerialDecode:
    def test_matches_sc_at_list_one(self):
        code = pk.CodeSpec.construct(128, 64)
        for t in range(200):
            u, llr = noisy_frame(code, 1.0, 11, t)
            assert np.array_equal(pk.scl_decode_serial(code, llr, 1),
                                  pk.sc_decode(code, llr))

    @pytest.mark.parametrize("list_size", [1, 2, 4])
    def test_noiseless_roundtrip_zero_penalty(self, list_size):
        code = pk.CodeSpec.construct(64, 40)
        rng = np.random.default_rng(8)
        u = pk.expand_message(code, rng.integers(0, 2, code.p, dtype=np.uint8))
        llr = pk.llr_demap(pk.bpsk_modulate(pk.encode(code, u)), 0.0)
        hists, pens = pk.scl_decode_serial(code, llr, list_size, return_paths=True)
        best = int(np.argmin(pens))
        assert np.array_equal(hists[best], u)
        assert pens[best] == 0.0

    def test_full_fork_penalties_small_code(self):
        # all-information length-2 code with stage LLRs (1, 2): the four
        # survivor penalties enumerate to {0, 1, 2, 3}
        code = pk.CodeSpec(n=2, p=2, frozen=np.zeros(2, dtype=bool))
        hists, pens = pk.scl_decode_serial(code, np.array([1.0, 2.0]), 4,
                                           return_paths=True)
        assert sorted(pens.tolist()) == [0.0, 1.0, 2.0, 3.0]

    def test_survivor_penalties_after_two_bits(self):
        # step the engine's own components through the first two decisions of
        # an all-information n=4 frame with channel LLRs (1, 2, 1, 2)
        state = StageState(np.array([1.0, 2.0, 1.0, 2.0]), depth=2, arith=Arith())
        s0 = state.stage_llrs(0)[:, 0]
        assert s0.tolist() == [1.0]
        pens = np.array([pk.penalty_increment_1bit(s0[0], 0),
                         pk.penalty_increment_1bit(s0[0], 1)])
        state.select(np.array([0, 0]))
        state.absorb_block(np.array([[0], [1]], dtype=np.uint8), 0)
        s1 = state.stage_llrs(1)[:, 0]
        assert s1.tolist() == [3.0, 1.0]
        cand = [pens[p] + pk.penalty_increment_1bit(s1[p], b)
                for b in (0, 1) for p in (0, 1)]
        assert sorted(cand) == [0.0, 1.0, 2.0, 3.0]

    def test_survivor_count_and_frozen_constraint(self):
        code = pk.CodeSpec.construct(32, 12)
        for t in range(20):
            u, llr = noisy_frame(code, 1.2, 13, t)
            hists, pens = pk.scl_decode_serial(code, llr, 8, return_paths=True)
            assert hists.shape[0] == min(8, 2 ** code.p)
            assert not hists[:, code.frozen].any()
            assert (pens >= 0).all()

    def test_penalties_match_per_bit_replay(self):
        # survivor penalty equals the sum of single-bit increments along its
        # own history, recomputed from scratch
        code = pk.CodeSpec.construct(32, 20)
        for t in range(10):
            u, llr = noisy_frame(code, 1.0, 17, t)
            hists, pens = pk.scl_decode_serial(code, llr, 4, return_paths=True)
            for hist, pen in zip(hists, pens):
                assert replay_penalty(code, llr, hist) == pytest.approx(pen, abs=1e-9)

    def test_metric_duality_argmin_equals_argmax(self):
        # the negated-penalty ranking equals ranking by the log-domain metric
        # increment sum_j (s_j (1 - out_j) - max(s_j, 0)) for one parent's forks
        rng = np.random.default_rng(19)
        for _ in range(200):
            s = float(rng.normal() * 3)
            pen = [pk.penalty_increment_1bit(s, b) for b in (0, 1)]
            metric = [s * (1 - b) - max(s, 0.0) for b in (0, 1)]
            assert int(np.argmin(pen)) == int(np.argmax(metric))
            assert pen[0] + metric[0] == pytest.approx(0.0)
            assert pen[1] + metric[1] == pytest.approx(0.0)


class TestListGain:
    def test_fer_monotone_in_list_size(self):
        # larger lists may not be worse, judged with overlapping-CI slack
        results = {}
        for lst in (1, 2, 4):
            cfg = pk.SimConfig(n=128, rate=0.5, decoder="scl", list_size=lst,
                               snr_start=2.0, snr_stop=2.0, snr_step=1.0,
                               max_frames=10000, min_errors=10 ** 9,
                               seed=29, workers=2)
            results[lst] = pk.run_point(cfg, 2.0)
        assert results[2].fer_ci_lo <= results[1].fer_ci_hi
        assert results[4].fer_ci_lo <= results[2].fer_ci_hi
        # and the point estimates themselves should already be ordered here
        assert results[4].fer <= results[1].fer
