#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace csd::detail {

class ExecutableNotFound : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ProcessResult {
    int exit_code = -1;    // valid when !signaled
    bool signaled = false; // terminated by a signal (including our kill)
    bool killed = false;   // we sent SIGKILL after the deadline
    std::string out;
    std::string err;
    double wall_time = 0.0;
};

/// Runs argv[0] (resolved via PATH) with stdin closed, capturing both output streams.
/// The child is killed once `deadline_s` seconds have elapsed.
ProcessResult run_process(const std::vector<std::string>& argv, double deadline_s);

} // namespace csd::detail
