"""sagnacsim command line tool and simulation library."""
