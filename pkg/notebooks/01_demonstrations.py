# coding: utf-8

# # Demonstrations and preprocessing
#
# A demonstration is two time-aligned pose streams sampled together: the
# hand-held device and the mandrel (workpiece). Poses are 6-vectors
# (x, y, z, rx, ry, rz) with rotation vectors in radians.
#
# Here we generate a synthetic set, smooth it, and express the device in
# the mandrel frame, which is what the rest of the pipeline works with.

# In[1]:

import numpy as np

from constrained_lfd.demogen import DemoGenConfig, generate
from constrained_lfd.metrics import pose_length, smoothness
from constrained_lfd.trajectory import preprocess, smooth_moving_average, to_mandrel_frame

cfg = DemoGenConfig(n_demos=10, seed=0)
demoset = generate(cfg)
print(len(demoset.demos), "demos")
for name, (dev, man) in zip(demoset.names, demoset.demos):
    print(f"{name}: {len(dev)} samples over {dev.duration:.2f} s")


# A centered moving average of width 10 takes out most of the hand tremor.
# Near the ends the window is truncated symmetrically, so the first and
# last samples are kept as recorded.

# In[2]:

dev, man = demoset.demos[0]
smoothed = smooth_moving_average(dev, 10)
print("first sample unchanged:", np.array_equal(smoothed.poses[0], dev.poses[0]))
raw_rel = to_mandrel_frame(dev, man)
rel = to_mandrel_frame(smoothed, smooth_moving_average(man, 10))
print(f"path length raw {pose_length(raw_rel):.4f} m, smoothed {pose_length(rel):.4f} m")
print(f"smoothness raw {smoothness(raw_rel):.1f} deg, smoothed {smoothness(rel):.1f} deg")


# preprocess() does both steps for a whole set.

# In[3]:

processed = preprocess(demoset, window=10)
lengths = np.array([pose_length(t) for t in processed])
turns = np.array([smoothness(t) for t in processed])
print("pose lengths (m):", np.round(lengths, 4))
print("smoothness (deg):", np.round(turns, 1))
