# coding: utf-8

# # Arm kinematics and collision checks
#
# A 7-joint arm described by standard DH parameters. Inverse kinematics is
# damped least squares from a seed configuration; collisions are checked
# between link capsules and scene obstacles.

# In[1]:

import numpy as np

from constrained_lfd.geometry import matrix_to_rotvec
from constrained_lfd.kinematics import (
    Scene,
    Sphere,
    check_collision,
    default_arm,
    default_scene,
    inverse_kinematics,
    link_frames,
)

arm = default_arm()
rng = np.random.default_rng(1)
q = rng.uniform(arm.lower, arm.upper)
T = link_frames(arm, q)[-1]    # tool frame as a 4x4 transform
print("tool position", np.round(T[:3, 3], 4))


# Move the target 1 cm and solve from the old configuration.

# In[2]:

target = T.copy()
target[:3, 3] += [0.01, 0.0, 0.0]
q2 = inverse_kinematics(arm, target, q)
T2 = link_frames(arm, q2)[-1]
print("position error (m):", np.linalg.norm(T2[:3, 3] - target[:3, 3]))
print("orientation error (rad):", np.linalg.norm(matrix_to_rotvec(target[:3, :3].T @ T2[:3, :3])))
print("largest joint change (deg):", np.degrees(np.abs(q2 - q).max()))


# In[3]:

scene = default_scene()
print("default scene obstacles:", len(scene.obstacles))
home = np.zeros(7)
print("home pose collides:", check_collision(arm, home, scene))
# a ball sitting on the tool
blocked = Scene((Sphere(link_frames(arm, home)[-1][:3, 3], 0.05),), scene.mandrel_pose)
print("with a ball on the tool:", check_collision(arm, home, blocked))
