//! Planning pipeline (to be implemented).
