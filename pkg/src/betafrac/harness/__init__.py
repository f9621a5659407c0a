"""Grid runner, corpus, oracles and report emission."""
