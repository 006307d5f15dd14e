#pragma once

// Library invariant suite behind `mlrh selftest`. Returns 0 when every
// invariant holds, 1 otherwise. Pass/fail report goes to stdout (byte-stable
// across runs); per-invariant timings go to stderr.
int run_selftest();
