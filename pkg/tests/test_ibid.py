"""Tests for identity-based identification."""

import itertools
import random

import pytest

from src.hashing.hash_sets import gen_exceptional_set, identity_hash
from src.protocols.ibid import (
    IbidCommitMessage,
    IbidTranscript,
    IbidUserKey,
    ibid_challenge,
    ibid_extract,
    ibid_extract_witness,
    ibid_index_accepts,
    ibid_params_from_secret,
    ibid_prove_commit,
    ibid_prove_commit_with,
    ibid_respond,
    ibid_setup,
    ibid_user_key_from,
    ibid_verifier_challenge,
    ibid_verifier_commit,
    ibid_verifier_decide,
    ibid_verifier_session,
    ibid_verify,
)
from src.utils.errors import (
    ExceptionalSetError,
    ExtractionError,
    LengthMismatchError,
    SessionStateError,
)
from src.utils.models import IbidMode, SessionPhase
from tests.conftest import ScriptedRandom, make_csidh, make_toy

ALICE = b"alice@example.org"


def _params(backend, s, mode="binary"):
    c_set = gen_exceptional_set(backend.n, backend.N)
    return ibid_params_from_secret(backend, s, c_set, mode)


def _session(backend, params, usk, identity, v, rng):
    message, session = ibid_prove_commit(backend, params, usk, rng)
    z = ibid_respond(backend, session, usk, v)
    return ibid_verify(backend, params, identity, message, v, z)


class TestHandExamples:
    """Toy backend, N = 101."""

    def test_master_curves(self):
        assert _params(make_toy(101, n=3), 5).E == (5, 10, 15)
        assert _params(make_toy(101, n=3), 0).E == (0, 0, 0)

    def test_user_key(self):
        backend = make_toy(101, n=2)
        usk = ibid_user_key_from(backend, _params(backend, 5), 5, (10, 20), (1, -1))
        assert usk.x == (5, 30)
        assert usk.X == (10, 20)

    def test_commit_follows_hashed_sign(self):
        backend = make_toy(101, n=1)
        params = _params(backend, 5)
        for u, expected in ((1, 12), (-1, 2)):
            usk = IbidUserKey(u=(u,), x=(0,), X=(0,))
            message, _ = ibid_prove_commit_with(backend, params, usk, (7,))
            assert message.K == (expected,)

    def test_respond(self):
        backend = make_toy(101, n=2)
        params = _params(backend, 5)
        usk = IbidUserKey(u=(1, -1), x=(5, 30), X=(10, 20))
        _, session = ibid_prove_commit_with(backend, params, usk, (7, 8))
        assert ibid_respond(backend, session, usk, (1, -1)) == (2, 38)

        _, session = ibid_prove_commit_with(backend, params, usk, (7, 8))
        assert ibid_respond(backend, session, usk, (0, 0)) == (7, 8)

        _, session = ibid_prove_commit_with(backend, params, usk, (1, 8))
        assert ibid_respond(backend, session, usk, (1, 0))[0] == 97

    def test_verify_by_hand(self):
        backend = make_toy(101, n=1)
        params = _params(backend, 5)
        message = IbidCommitMessage(X=(10,), K=(12,))
        assert ibid_verify(backend, params, b"anyone", message, (1,), (2,))
        assert not ibid_verify(backend, params, b"anyone", message, (1,), (3,))


class TestKeys:
    def test_published_key_is_commitment_curve(self, rng):
        backend = make_toy(101, n=4)
        params, s = ibid_setup(backend, rng, mode="binary")
        r = backend.sample_exponent_vec(rng, 4)
        R = backend.act_vec(r, backend.base_vec(4))
        u = identity_hash(params.action, ALICE, R)
        usk = ibid_user_key_from(backend, params, s, r, u)
        assert usk.X == R
        for xi, Xi, Ei, ui in zip(usk.x, usk.X, params.E, usk.u):
            assert backend.act(xi, backend.curve_power(Ei, ui)) == Xi

    def test_extract_binds_identity_hash(self, rng):
        backend = make_toy(101, n=4)
        params, s = ibid_setup(backend, rng, mode="binary")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        assert usk.u == identity_hash(params.action, ALICE, usk.X)

    def test_setup_resamples_zero_master(self):
        backend = make_toy(101, n=3)
        params, s = ibid_setup(backend, ScriptedRandom([0, 5]), mode="paper", require_nonzero=True)
        assert s == 5
        assert params.E == (5, 10, 15)
        assert params.mode == IbidMode.PAPER

        params, s = ibid_setup(backend, ScriptedRandom([0]), mode="paper", require_nonzero=False)
        assert s == 0
        assert params.E == (0, 0, 0)

    def test_strict_setup_on_small_class_group(self, rng):
        backend = make_csidh(n=4)
        with pytest.raises(ExceptionalSetError):
            ibid_setup(backend, rng, strict=True)
        params, _ = ibid_setup(backend, rng, strict=False)
        assert not params.exceptional_set.verified


class TestBinaryMode:
    """Complete: every honest run accepts."""

    def test_all_challenges_small_n(self, rng):
        for n in (1, 2, 3):
            backend = make_toy(101, n=n)
            params, s = ibid_setup(backend, rng, mode="binary")
            for _ in range(5):
                usk = ibid_extract(backend, params, s, ALICE, rng)
                for v in itertools.product((0, 1), repeat=n):
                    assert _session(backend, params, usk, ALICE, v, rng)

    @pytest.mark.slow
    def test_csidh_runs(self, rng):
        backend = make_csidh(n=8)
        params, s = ibid_setup(backend, rng, mode="binary", strict=False)
        for i in range(1000):
            usk = ibid_extract(backend, params, s, b"user-%d" % i, rng)
            v = ibid_challenge(params, rng)
            assert _session(backend, params, usk, b"user-%d" % i, v, rng)

    def test_rejects_outside_alphabet(self, rng):
        backend = make_toy(101, n=2)
        params, s = ibid_setup(backend, rng, mode="binary")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        assert not _session(backend, params, usk, ALICE, (1, -1), rng)

    def test_rejects_other_identity(self, rng):
        backend = make_toy(101, n=16)
        params, s = ibid_setup(backend, rng, mode="binary")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        assert not _session(backend, params, usk, b"mallory", (0,) * 16, rng)

    def test_challenge_alphabet(self, rng):
        backend = make_toy(101, n=16)
        params, _ = ibid_setup(backend, rng, mode="binary")
        assert set(ibid_challenge(params, rng)) <= {0, 1}


class TestPaperMode:
    """Twisted branch rejects honest provers unless 2 s c_i = 0 mod N."""

    def test_exhaustive_small_n(self, rng):
        backend = make_toy(101, n=3)
        params, s = ibid_setup(backend, rng, mode="paper")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        for v in itertools.product((-1, 0, 1), repeat=3):
            assert _session(backend, params, usk, ALICE, v, rng) == (-1 not in v)

    def test_zero_master_accepts_twisted_branch(self, rng):
        backend = make_toy(101, n=2)
        params = _params(backend, 0, mode="paper")
        usk = ibid_extract(backend, params, 0, ALICE, rng)
        assert _session(backend, params, usk, ALICE, (-1, -1), rng)

    def test_acceptance_rate(self):
        rng = random.Random(99)
        backend = make_toy(101, n=4)
        params, s = ibid_setup(backend, rng, mode="paper")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        sessions = 20000
        accepted = sum(
            _session(backend, params, usk, ALICE, ibid_challenge(params, rng), rng)
            for _ in range(sessions)
        )
        assert abs(accepted / sessions - (2 / 3) ** 4) < 0.02

    def test_index_predicate(self):
        assert ibid_index_accepts(IbidMode.PAPER, 0, 17, 101)
        assert ibid_index_accepts(IbidMode.PAPER, 1, 17, 101)
        assert not ibid_index_accepts(IbidMode.PAPER, -1, 17, 101)
        assert ibid_index_accepts(IbidMode.PAPER, -1, 0, 101)
        assert not ibid_index_accepts(IbidMode.BINARY, -1, 0, 101)


class TestSessions:
    """Phase ordering on both ends."""

    def _setup(self, rng):
        backend = make_toy(101, n=4)
        params, s = ibid_setup(backend, rng, mode="binary")
        return backend, params, ibid_extract(backend, params, s, ALICE, rng)

    def test_verifier_flow(self, rng):
        backend, params, usk = self._setup(rng)
        message, prover = ibid_prove_commit(backend, params, usk, rng)
        verifier = ibid_verifier_session()
        ibid_verifier_commit(verifier, message)
        v = ibid_verifier_challenge(params, verifier, rng)
        z = ibid_respond(backend, prover, usk, v)
        assert ibid_verifier_decide(backend, params, ALICE, verifier, z)
        assert verifier.phase == SessionPhase.DECIDED and verifier.accepted
        assert prover.phase == SessionPhase.RESPONDED

    def test_out_of_order(self, rng):
        backend, params, usk = self._setup(rng)
        message, prover = ibid_prove_commit(backend, params, usk, rng)
        verifier = ibid_verifier_session()
        with pytest.raises(SessionStateError):
            ibid_verifier_challenge(params, verifier, rng)
        with pytest.raises(SessionStateError):
            ibid_verifier_decide(backend, params, ALICE, verifier, (0,) * 4)
        ibid_verifier_commit(verifier, message)
        with pytest.raises(SessionStateError):
            ibid_verifier_commit(verifier, message)
        with pytest.raises(SessionStateError):
            ibid_respond(backend, verifier, usk, (0,) * 4)

        ibid_respond(backend, prover, usk, (1, 0, 1, 0))
        with pytest.raises(SessionStateError):
            ibid_respond(backend, prover, usk, (0, 1, 0, 1))

    def test_length_checks(self, rng):
        backend, params, usk = self._setup(rng)
        message, prover = ibid_prove_commit(backend, params, usk, rng)
        with pytest.raises(LengthMismatchError):
            ibid_respond(backend, prover, usk, (1, 0))
        with pytest.raises(LengthMismatchError):
            ibid_verify(backend, params, ALICE, message, (0,) * 4, (0,) * 3)


class TestWitnessExtraction:
    def _transcripts(self, backend, params, usk, challenges):
        k = (3, 1, 4, 1)
        transcripts = []
        for v in challenges:
            message, session = ibid_prove_commit_with(backend, params, usk, k)
            z = ibid_respond(backend, session, usk, v)
            transcripts.append(IbidTranscript(message=message, v=v, z=z))
        return transcripts

    def test_recovers_key_entry(self, rng):
        backend = make_toy(101, n=4)
        params, s = ibid_setup(backend, rng, mode="binary")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        first, second = self._transcripts(backend, params, usk, [(0, 0, 1, 0), (0, 0, 0, 0)])
        assert ibid_extract_witness(backend, params, ALICE, first, second) == (2, usk.x[2])

    def test_errors(self, rng):
        backend = make_toy(101, n=4)
        params, s = ibid_setup(backend, rng, mode="binary")
        usk = ibid_extract(backend, params, s, ALICE, rng)
        first, second = self._transcripts(backend, params, usk, [(1, 0, 0, 0), (1, 0, 0, 0)])
        with pytest.raises(ExtractionError):
            ibid_extract_witness(backend, params, ALICE, first, second)

        message, session = ibid_prove_commit(backend, params, usk, rng)
        other = IbidTranscript(message=message, v=(0, 0, 0, 0),
                               z=ibid_respond(backend, session, usk, (0, 0, 0, 0)))
        with pytest.raises(ExtractionError):
            ibid_extract_witness(backend, params, ALICE, first, other)

        forged = first.model_copy(update={"z": ((first.z[0] + 1) % 101,) + first.z[1:]})
        with pytest.raises(ExtractionError):
            ibid_extract_witness(backend, params, ALICE, forged, second)
