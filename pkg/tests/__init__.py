"""sagnacsim tests."""
