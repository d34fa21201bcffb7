import pytest

from robinlab import harness


@pytest.fixture(scope="session")
def bundled_report():
    """Run bundled configs once per session and cache the reports."""
    cache = {}

    def get(name):
        if name not in cache:
            config = harness.load_bundled_config(name)
            cache[name] = harness.run(config)
        return cache[name]

    return get
