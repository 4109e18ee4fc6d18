#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cli {

/*
  Runs one pabs invocation. args holds the command line without the program
  name. Returns the process exit code: 0 for success and passing checks, 1
  when a check fails, a model is not representable, value iteration does not
  converge, or a search proves the task unsolvable, and 2 for usage and
  input errors.
*/
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace cli
