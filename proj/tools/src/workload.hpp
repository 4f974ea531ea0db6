#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bitstree/interval.hpp"

namespace bitstree::bench {

/// Maps the string ids used in segment and script files to dense numeric ids.
class id_table {
public:
    segment_id intern(const std::string& name);
    std::optional<segment_id> lookup(const std::string& name) const;
    const std::string& name(segment_id id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

private:
    std::map<std::string, segment_id> by_name_;
    std::vector<std::string> names_;
};

struct workload_op {
    enum class kind { insert, erase, stab, range, stats, check };
    kind k = kind::stab;
    segment seg;  // insert (erase uses seg.id only)
    coord x = 0;  // stab
    range r;      // range
};

struct parse_error {
    std::size_t line = 0;
    std::string message;
};

/// Segment files: one `<id> <lo> <hi>` record per line, `#` comments,
/// whitespace separated, decimal integer coordinates with lo < hi.
std::optional<parse_error> parse_segments(std::istream& in, id_table& table,
                                          std::vector<segment>& out);

/// Script files: one op per line:
///   insert <id> <lo> <hi> | delete <id> | stab <x> | range <lo> <hi>
///   | stats | check
std::optional<parse_error> parse_script(std::istream& in, id_table& table,
                                        std::vector<workload_op>& out);

/// Renders ops back into script form (reproducer files).
void write_script(std::ostream& out, const std::vector<workload_op>& ops,
                  const id_table& table);

enum class structure_sel { bits, sst, dst, all };

struct run_options {
    structure_sel structure = structure_sel::bits;
    bool check = false;  // run the invariant checker after every mutation
    std::optional<std::pair<coord, coord>> dst_range;
};

/// Preloads the segments into the selected structures, then executes the ops
/// in order, emitting one JSON record per line. Returns the process exit
/// code: 0, or 2 when an invariant check failed.
int run_workload(const std::vector<segment>& preload,
                 const std::vector<workload_op>& ops, const id_table& table,
                 const run_options& opt, std::ostream& out);

}  // namespace bitstree::bench
