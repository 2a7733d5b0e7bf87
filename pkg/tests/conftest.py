import pytest

from stif import demo
from stif.config import RunConfig
from stif.corpus import MonolingualCorpus
from stif.lexicon import InformalDictionary

TOY = [("gak bisa", "tidak bisa"), ("gak mau", "tidak mau")]


@pytest.fixture(scope="session")
def demo_corpus():
    return demo.make_corpus(0)


@pytest.fixture(scope="session")
def small_corpus():
    return demo.make_corpus(3, sizes=(300, 40, 60))


@pytest.fixture(scope="session")
def demo_mono():
    return MonolingualCorpus(demo.make_monolingual(1000, 1))


@pytest.fixture(scope="session")
def demo_dictionary():
    return InformalDictionary(demo.make_dictionary(2))


@pytest.fixture(scope="session")
def fast_config():
    return RunConfig(beam_size=20, workers=1, split_train=300, split_dev=40, split_test=60)


@pytest.fixture(scope="session")
def small_system(small_corpus, fast_config):
    from stif.semisup import train_system
    return train_system(small_corpus, config=fast_config)
