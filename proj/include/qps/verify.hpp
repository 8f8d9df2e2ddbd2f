#pragma once

// Invariant suite behind `qps verify`.

#include <string>
#include <vector>

namespace qps {

struct VerifyOptions {
  int max_prime = 7;          // fields GF(d^n) with d <= max_prime ...
  unsigned max_order = 27;    // ... and d^n <= max_order
  std::vector<int> extra_dims; // single-qudit dimensions with the large-d checks (e.g. 31)
  unsigned seed = 20240611;
  double tol_scale = 1.0;      // multiplies every tolerance
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;   // worst deviation seen, when meaningful
  double seconds = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool ok() const;
  std::vector<std::string> failures() const;
  std::string to_json() const;
};

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace qps
