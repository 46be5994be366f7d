#pragma once

#include <string>
#include <vector>

#include "renewal/gap_law.hpp"

namespace renewal {

// Exit codes: 0 all verdicts pass; 1 verdict failure; 2 malformed
// config/usage; 3 horizon overflow; 4 inapplicable case/statistic.
enum CliExit : int {
    kCliOk = 0,
    kCliVerdictFailed = 1,
    kCliBadConfig = 2,
    kCliHorizonOverflow = 3,
    kCliInapplicable = 4,
};

// "builtin:NAME:..." or a path to a law JSON file.
GapLaw parse_law_spec(const std::string& spec);

int cli_main(const std::vector<std::string>& args);

}  // namespace renewal
