#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "kc.hpp"

namespace kccli {

  int cmd_eta(Source const& src, Settings const& st, std::size_t max_d,
              bool oracle, std::ostream& out);

  int cmd_coverings(Source const& src, Settings const& st, std::size_t max_d,
                    std::string const& dump_dir, std::ostream& out);

  int cmd_povm(Source const& src, Settings const& st, std::size_t degree,
               kc_povm_options const& opts, bool all_reports,
               std::ostream& out);

  int cmd_cosets(Source const& src, Settings const& st,
                 std::string const& subgroup, bool table, std::ostream& out);

  int cmd_catalog(std::string const& key, std::ostream& out);

  int cmd_reproduce(std::string const& table, Settings const& st,
                    std::optional<std::size_t> max_d,
                    kc_povm_options const& opts, std::ostream& out);

}  // namespace kccli
