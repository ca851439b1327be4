#ifndef EQSIM_HARNESS_CLI_HPP
#define EQSIM_HARNESS_CLI_HPP

namespace eqsim {

// Exit codes: 0 all certified bounds satisfied, 2 at least one verdict (or
// selftest check, or gap check) failed, 3 configuration error, 4 runtime or
// numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace eqsim

#endif
