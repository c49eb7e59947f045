# coding: utf-8

# # Aligning demonstrations with DTW
#
# Demonstrations run at different speeds. Dynamic time warping maps every
# one of them onto the timeline of the median-length demo; the per-step
# mean and standard deviation of the aligned set form the model.

# In[1]:

import numpy as np

from constrained_lfd.alignment import align_set, build_model, dtw, reference_index
from constrained_lfd.demogen import DemoGenConfig, generate
from constrained_lfd.trajectory import preprocess

# A toy pair first: b is a with its middle sample repeated.

a = np.array([0.0, 1.0, 2.0, 3.0])
b = np.array([0.0, 1.0, 1.0, 2.0, 3.0])
path = dtw(a, b)
print("cost", path.cost)
print("pairs", path.pairs)


# In[2]:

demos = preprocess(generate(DemoGenConfig(n_demos=10, seed=0)), 10)
lengths = [len(d) for d in demos]
ref = reference_index(lengths)
print("lengths", lengths, "-> reference demo", ref)

aligned = align_set(demos)
print("aligned lengths", {len(d) for d in aligned})


# In[3]:

model = build_model(aligned)
sig = model.sigma_translations
print(f"{len(model)} steps from {model.count} demos")
print(f"median translation sigma: {np.median(sig, axis=0) * 1e3} mm")
print(f"largest translation sigma: {sig.max() * 1e3:.2f} mm")
