import numpy as np
import pytest
from fastapi.testclient import TestClient

import polarkit as pk
from polarkit.service import app

client = TestClient(app)


class TestHealth:
    def test_health(self):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"


class TestConstruct:
    def test_known_code(self):
        resp = client.post("/construct", json={"n": 4, "info_bits": 2})
        assert resp.status_code == 200
        assert resp.json() == {"n": 4, "info_bits": 2, "frozen_positions": [0, 1]}

    def test_rate_default(self):
        resp = client.post("/construct", json={"n": 64})
        assert resp.json()["info_bits"] == 32

    def test_invalid_length(self):
        resp = client.post("/construct", json={"n": 48})
        assert resp.status_code == 400


class TestEncode:
    def test_known_vector(self):
        resp = client.post("/encode", json={
            "code": {"n": 4, "info_bits": 2}, "info_bits": [1, 1]})
        assert resp.status_code == 200
        assert resp.json()["codeword"] == [0, 1, 0, 1]

    def test_explicit_frozen_positions(self):
        resp = client.post("/encode", json={
            "code": {"n": 4, "frozen_positions": [0, 1]}, "info_bits": [1, 1]})
        assert resp.json()["codeword"] == [0, 1, 0, 1]

    def test_wrong_info_length(self):
        resp = client.post("/encode", json={
            "code": {"n": 4, "info_bits": 2}, "info_bits": [1, 1, 0]})
        assert resp.status_code == 400


class TestDecode:
    def roundtrip(self, decoder, **extra):
        code = pk.CodeSpec.construct(32, 16)
        rng = np.random.default_rng(77)
        info = rng.integers(0, 2, 16, dtype=np.uint8)
        u = pk.expand_message(code, info)
        llr = pk.llr_demap(pk.bpsk_modulate(pk.encode(code, u)), 0.0)
        resp = client.post("/decode", json={
            "code": {"n": 32, "info_bits": 16},
            "llrs": llr.tolist(), "decoder": decoder, **extra})
        assert resp.status_code == 200
        body = resp.json()
        assert body["info_bits"] == info.tolist()
        assert body["u_hat"] == u.tolist()
        return body

    def test_sc(self):
        self.roundtrip("sc")

    def test_scl(self):
        body = self.roundtrip("scl", list_size=4)
        assert body["penalty"] == 0.0

    def test_multibit(self):
        body = self.roundtrip("scl-multibit", list_size=4, block_exponent=2)
        assert body["penalty"] == 0.0

    def test_multibit_fixed(self):
        self.roundtrip("scl-multibit", list_size=2, block_exponent=1,
                       quantize="fixed")

    def test_unknown_decoder(self):
        resp = client.post("/decode", json={
            "code": {"n": 4, "info_bits": 2}, "llrs": [1, 1, 1, 1],
            "decoder": "bp"})
        assert resp.status_code == 400

    def test_wrong_llr_count(self):
        resp = client.post("/decode", json={
            "code": {"n": 8, "info_bits": 4}, "llrs": [1.0, -1.0],
            "decoder": "sc"})
        assert resp.status_code == 400


class TestSimulate:
    def test_small_run(self):
        resp = client.post("/simulate", json={
            "n": 64, "rate": 0.5, "decoder": "sc", "snr_start": 2.0,
            "snr_stop": 3.0, "snr_step": 1.0, "max_frames": 30,
            "min_errors": 1000, "seed": 9})
        assert resp.status_code == 200
        points = resp.json()["points"]
        assert [p["snr_db"] for p in points] == [2.0, 3.0]
        assert all(p["frames"] == 30 for p in points)

    def test_matches_local_run(self):
        payload = {"n": 64, "rate": 0.5, "decoder": "scl", "list_size": 2,
                   "snr_start": 2.0, "snr_stop": 2.0, "snr_step": 1.0,
                   "max_frames": 40, "min_errors": 1000, "seed": 21}
        remote = client.post("/simulate", json=payload).json()["points"][0]
        cfg = pk.SimConfig(n=64, rate=0.5, decoder="scl", list_size=2,
                           snr_start=2.0, snr_stop=2.0, snr_step=1.0,
                           max_frames=40, min_errors=1000, seed=21)
        local = pk.run_point(cfg, 2.0)
        assert remote["frame_errors"] == local.frame_errors
        assert remote["bit_errors"] == local.bit_errors
        assert remote["fer"] == local.fer

    def test_invalid_config(self):
        resp = client.post("/simulate", json={"n": 64, "decoder": "nope"})
        assert resp.status_code == 400

    def test_validation_layer(self):
        resp = client.post("/simulate", json={"n": "many"})
        assert resp.status_code == 422


class TestLatency:
    def test_table(self):
        resp = client.get("/latency", params={"n": 1024})
        assert resp.status_code == 200
        body = resp.json()
        by_k = {r["block_exponent"]: r["cycles"] for r in body["rows"]}
        assert by_k[2] == 1022
        assert by_k[3] == 510

    def test_bad_n(self):
        resp = client.get("/latency", params={"n": 100})
        assert resp.status_code == 400
