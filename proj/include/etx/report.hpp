#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace etx {

// Ordered key/value tree rendered as indented text or JSON; insertion
// order is preserved so reports are deterministic.
struct ReportNode {
    std::string key;
    std::string value;  // empty for pure section nodes
    std::vector<ReportNode> children;

    ReportNode& section(const std::string& k);
    ReportNode& entry(const std::string& k, const std::string& v);
};

void write_text(const ReportNode& root, std::ostream& out, int indent = 0);
void write_json(const ReportNode& root, std::ostream& out);

}  // namespace etx
