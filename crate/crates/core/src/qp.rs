//! Dense convex QP/LP solver (to be implemented).
