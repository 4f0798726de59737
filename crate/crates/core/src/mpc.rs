//! Receding-horizon controller (to be implemented).
