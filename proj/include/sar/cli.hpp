#pragma once

namespace sar {

/// Entry point of the sarctl tool, callable in-process for tests.
/// Exit codes: 0 success, 2 config error, 3 stage failure, 4 I/O error.
int sarctl_main(int argc, const char* const* argv);

} // namespace sar
