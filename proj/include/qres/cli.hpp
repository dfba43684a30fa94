// SPDX-License-Identifier: Apache-2.0
//
// Command-line frontend. Thin shell over the library: every command output
// equals the corresponding direct library call bit for bit given the same
// seed. Exit codes: 0 success, 1 numerical-domain failure, 2 usage or parse
// error.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qres::cli {

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qres::cli
