"""swarmplan: structured-prediction multi-agent task assignment toolkit."""

__version__ = "0.1.0"
