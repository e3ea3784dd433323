import numpy as np
import pytest

import emgrt


def make_window(rng, n=50, c=8, scale=5.0):
    return emgrt.SignalWindow(rng.normal(0.0, scale, (n, c)))


@pytest.fixture(scope="session")
def tiny_corpus():
    """Two sessions per motion, 3 s each: enough to train on, fast."""
    return emgrt.gen_corpus(range(2), duration_s=3.0)


@pytest.fixture(scope="session")
def heldout_corpus():
    return emgrt.gen_corpus(range(100, 102), duration_s=3.0)


@pytest.fixture(scope="session")
def trained_pipeline(tiny_corpus):
    return emgrt.train_pipeline(tiny_corpus.recordings, emgrt.PipelineConfig(), seed=0)


@pytest.fixture(scope="session")
def kernel_pipeline():
    corpus = emgrt.gen_corpus(range(1), duration_s=2.0)
    config = emgrt.PipelineConfig(projection_kind="kernel")
    return emgrt.train_pipeline(corpus.recordings, config, seed=0)
