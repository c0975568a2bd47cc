#include "pxc/csv.hpp"

#include <istream>
#include <ostream>

namespace pxc {

std::optional<std::vector<std::string>> CsvReader::next() {
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return std::nullopt;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;

    while (true) {
        if (c == std::istream::traits_type::eof()) {
            fields.push_back(std::move(field));
            break;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            fields.push_back(std::move(field));
            break;
        } else if (ch == '\r') {
            if (in_.peek() == '\n') in_.get();
            fields.push_back(std::move(field));
            break;
        } else {
            field.push_back(ch);
        }
        c = in_.get();
    }
    ++record_;
    return fields;
}

std::string csv_escape(const std::string& field) {
    bool needs_quote = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

void write_csv_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

}  // namespace pxc
