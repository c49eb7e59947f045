# coding: utf-8

# # Search space: grid, envelope and candidate actions
#
# The agent moves inside a box around the mean path. At step k it picks one
# of 126 targets: stay where it is (action 0) or go to one of the 5x5x5
# lattice points at {-1, -1/2, 0, 1/2, 1} sigma around the next mean position.

# In[1]:

import numpy as np

from constrained_lfd.alignment import align_set, build_model
from constrained_lfd.demogen import DemoGenConfig, generate
from constrained_lfd.trajectory import preprocess
from constrained_lfd.workspace import CENTER_ACTION, action_targets, build_grid, in_envelope

model = build_model(align_set(preprocess(generate(DemoGenConfig(seed=0)), 10)))
grid = build_grid(model, 0.002)
print("grid origin", grid.origin, "dims", grid.dims)


# In[2]:

k = 50
targets = action_targets(model, k, model.mean_translations[k])
print(targets.shape)
print("center action hits the mean:", np.array_equal(targets[CENTER_ACTION], model.mean_translations[k + 1]))
inside = [in_envelope(model, k + 1, p) for p in targets[1:]]
print("lattice points inside the next envelope:", sum(inside), "of", len(inside))


# Halving the grid step roughly doubles the cell count per axis.

# In[3]:

fine = build_grid(model, 0.001)
print(np.array(fine.dims) / np.array(grid.dims))
