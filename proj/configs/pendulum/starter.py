def policy(obs):
  """obs size is 3. return shape is ()"""
  x1 = np.arctan2(-obs[1], obs[0])
  # Swing by velocity sign far from upright, balance with a PD law near it.
  if np.abs(x1) > np.pi / 3.0:
    action = np.sign(obs[2])
  else:
    action = 0.2 * np.sin(x1) - 2.0 * obs[2]
  return action
