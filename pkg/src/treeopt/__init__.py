"""treeopt: population-based tree search for continuous derivative-free optimization."""

from .baselines import PsoConfig, pso_optimize, random_search
from .benchmarks import BENCHMARKS, benchmark_value, make_benchmark, penalty_u
from .core import (Budget, BudgetExhausted, Evaluator, Objective, SearchSpace,
                   clamp, denormalize, evaluate_counted, normalize)
from .design import (ConstraintReport, make_pressure_vessel, make_welded_beam,
                     penalized_objective, pressure_vessel_constraints,
                     pressure_vessel_cost, welded_beam_constraints,
                     welded_beam_cost)
from .orchestrator import (Candidate, GlobalConfig, LocalConfig, MctsConfig,
                           RunResult, adapt_window, optimize, prune,
                           run_global_batch, run_local_stage, select_top)
from .registry import (ConfigError, make_problem, optimizer_ids, problem_ids,
                       run_optimizer)
from .sampling import (HypersphereConfig, HypersphereSampler, RandomStream,
                       hypersphere_sample, lhs_sample)
from .surrogate import (DistanceModel, LogisticModel, LogisticSampler,
                        SurrogateConfig, TrialHistory, bootstrap_proposals,
                        direction_features, distance_cdf, logistic_grad,
                        logistic_loss, optimize_direction, rbf_centers,
                        rbf_features, sample_step_size, train_logistic)
from .tree import Tree, TreeConfig, TreeNode, reward_of, ucb, window_scale

__version__ = "0.1.0"
