"""dnemu: symbolic transition tables taught to, and emulated by, a
winner-take-all network of incrementally averaged pattern neurons."""

from .automata import (AgentFaControl, SuccessorModel, Symbol, TmControl,
                       TransitionTable, compose_grand, read_only_tm_from_table,
                       simulate_tm, table_from_json, table_to_json,
                       tm_to_agent_fa)
from .estimator import TransitionEmulator, triples_to_arrays
from .grounding import (AmbiguousDecodeError, GroundingMap, TrainingTriple,
                        apply_mask, format_bits, parse_bits, table_to_triples,
                        union_patterns)
from .harness import (RunReport, TeachingSchedule, VerificationReport,
                      emit_metrics, oracle_nearest_context, run_free,
                      stored_contexts, teach, teach_sequence, teach_table,
                      verify_error_free)
from .network import (EPSILON, PERFECT_MATCH, Network, Neuron, ProjectionArea,
                      StepInput, StepOutput, YArea)
from .numerics import amnesic_update, normalize
from .plasticity import (MaintenanceConfig, SynapseStats, apply_maintenance,
                         synaptogenic_decision, update_deviation)

__version__ = "0.1.0"

__all__ = [
    "AgentFaControl", "AmbiguousDecodeError", "EPSILON", "GroundingMap",
    "MaintenanceConfig", "Network", "Neuron", "PERFECT_MATCH",
    "ProjectionArea", "RunReport", "StepInput", "StepOutput",
    "SuccessorModel", "Symbol", "SynapseStats", "TeachingSchedule",
    "TmControl", "TrainingTriple", "TransitionEmulator", "TransitionTable",
    "VerificationReport", "YArea", "amnesic_update", "apply_maintenance",
    "apply_mask", "compose_grand", "emit_metrics", "format_bits",
    "normalize", "oracle_nearest_context", "parse_bits",
    "read_only_tm_from_table", "run_free", "simulate_tm", "stored_contexts",
    "table_from_json", "table_to_json", "table_to_triples", "teach",
    "teach_sequence", "teach_table", "tm_to_agent_fa", "triples_to_arrays",
    "union_patterns", "update_deviation", "verify_error_free",
]
