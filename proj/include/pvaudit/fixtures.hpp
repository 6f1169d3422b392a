#pragma once

#include <string_view>

// Input columns of the published tables, embedded at build time from data/.
// Only inputs live here; the printed results are the expected side of the
// reproduction diff.
namespace pvaudit::fixtures {

std::string_view table1_csv();   // 14 single-block studies (O, P, C)
std::string_view figure1_csv();  // one study, two blocks
std::string_view table2_csv();   // 13 current-asthma effects
std::string_view table3_csv();   // 27 current-wheeze effects
std::string_view regions_csv();  // two regional estimates combined by inverse variance

}  // namespace pvaudit::fixtures
