# coding: utf-8

# # End to end: demonstrations to an optimized trajectory
#
# Train the Q-network on the default setup (200 episodes, about two to three
# minutes on one core), roll out the greedy policy and compare it with the
# demonstrations. The command-line tool runs the same steps:
#
#     constrained-lfd demogen --out run/demos
#     constrained-lfd model run/demos --out run/model
#     constrained-lfd train --model run/model/model.json --out run/train
#     constrained-lfd optimize --checkpoint run/train/checkpoint.json --model run/model/model.json --out run/opt
#     constrained-lfd evaluate run/opt/optimized_pose.csv --joints run/opt/optimized_joints.csv --demos run/demos --out run/eval

# In[1]:

import logging
from pathlib import Path

import numpy as np

from constrained_lfd.config import RunConfig
from constrained_lfd.demogen import generate
from constrained_lfd.pipeline import evaluate, model_from_demos, optimize, train
from constrained_lfd.plots import plot_reports, plot_returns
from constrained_lfd.trajectory import preprocess

logging.basicConfig(level=logging.INFO, format="%(message)s")
out = Path("notebook_run")

cfg = RunConfig().with_seed(0)
demoset = generate(cfg.demogen)
model = model_from_demos(demoset, cfg.window)


# In[2]:

result = train(model, cfg, out / "train")
returns = [r["return"] for r in result.episodes]
print(f"mean return first 20 {np.mean(returns[:20]):.1f}, last 20 {np.mean(returns[-20:]):.1f}")
print("envelope violations:", result.envelope_violations)
plot_returns(result.episodes, out / "returns.svg")


# In[3]:

traj, joints = optimize(result.agent, model, cfg)
items = [(name, t, None) for name, t in zip(demoset.names, preprocess(demoset, cfg.window))]
items.append(("optimized", traj, joints))
reports = evaluate(items)
for r in reports:
    print(f"{r.label:>10}  {r.pose_length_m:.4f} m  {r.smoothness_deg:6.2f} deg")
plot_reports(reports, out / "comparison.svg", [(lab, t) for lab, t, _ in items])
