"""
Orchestrating agents shared by the CLI and the HTTP front end
"""

from backend.agents.experiment_runner import ExperimentRunner
from backend.agents.table_verifier import TableVerifier

__all__ = ['ExperimentRunner', 'TableVerifier']
