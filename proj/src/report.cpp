#include "etx/report.hpp"

#include "json.hpp"

namespace etx {

ReportNode& ReportNode::section(const std::string& k) {
    children.push_back({k, "", {}});
    return children.back();
}

ReportNode& ReportNode::entry(const std::string& k, const std::string& v) {
    children.push_back({k, v, {}});
    return children.back();
}

void write_text(const ReportNode& root, std::ostream& out, int indent) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (!root.key.empty()) {
        out << pad << root.key;
        if (!root.value.empty()) out << " = " << root.value;
        out << "\n";
    }
    for (auto& ch : root.children) write_text(ch, out, root.key.empty() ? indent : indent + 1);
}

static nlohmann::ordered_json to_json(const ReportNode& n) {
    if (n.children.empty()) return n.value;
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    if (!n.value.empty()) obj["value"] = n.value;
    for (auto& ch : n.children) {
        // Duplicate keys become arrays to keep everything addressable.
        if (obj.contains(ch.key)) {
            if (!obj[ch.key].is_array()) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                arr.push_back(obj[ch.key]);
                obj[ch.key] = arr;
            }
            obj[ch.key].push_back(to_json(ch));
        } else {
            obj[ch.key] = to_json(ch);
        }
    }
    return obj;
}

void write_json(const ReportNode& root, std::ostream& out) {
    out << to_json(root).dump(2) << "\n";
}

}  // namespace etx
