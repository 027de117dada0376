def policy(obs):
  """obs = [cup_x, cup_z, ball_x, ball_z, cup_vx, cup_vz, ball_vx, ball_vz]. return shape is (2,)"""
  dx = obs[2] - obs[0]
  dz = obs[3] - obs[1]
  # Pump the cup against the ball's swing, then lift it under the ball.
  target_x = 0.8 * dx - 0.1 * obs[6]
  if dz > 0.0:
    target_z = obs[1] - 0.5 * dz
  else:
    target_z = 0.2 * obs[7]
  return [target_x, target_z]
