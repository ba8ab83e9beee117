// io.hpp
// Text formats. Point sets are one point per line, n comma-separated residues;
// '#' starts a comment and blank lines are skipped. System files carry a
// "v r" header then r rows of v integers. M files hold one point tuple per
// line, v * n residues. Writers emit points in ascending index order so
// repeated runs are byte-identical.

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kstar/field_space.hpp"
#include "kstar/systems.hpp"

namespace kstar {
namespace io {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    std::string s = pos == std::string::npos ? line : line.substr(0, pos);
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::int64_t> parse_int_fields(const std::string& text, char sep,
                                                  const std::string& what, int line_no) {
    std::vector<std::int64_t> out;
    std::string field;
    std::istringstream ss(text);
    auto take = [&](const std::string& tok) {
        if (tok.empty()) return;
        std::size_t used = 0;
        std::int64_t value;
        try {
            value = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + " line " + std::to_string(line_no) +
                                        ": bad integer '" + tok + "'");
        }
        if (used != tok.size())
            throw std::invalid_argument(what + " line " + std::to_string(line_no) +
                                        ": bad integer '" + tok + "'");
        out.push_back(value);
    };
    if (sep == ' ') {
        std::string tok;
        while (ss >> tok) take(tok);
    } else {
        while (std::getline(ss, field, sep)) {
            auto b = field.find_first_not_of(" \t");
            if (b == std::string::npos) {
                take("");
                continue;
            }
            auto e = field.find_last_not_of(" \t");
            take(field.substr(b, e - b + 1));
        }
    }
    return out;
}

inline PointSet read_point_set(std::istream& in, const FieldSpace& space,
                               const std::string& what = "point set") {
    PointSet set(space.size());
    std::string line;
    int line_no = 0;
    std::vector<std::uint32_t> coords(static_cast<std::size_t>(space.n()));
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = strip_comment(line);
        if (body.empty()) continue;
        auto fields = parse_int_fields(body, ',', what, line_no);
        if (static_cast<int>(fields.size()) != space.n())
            throw std::invalid_argument(what + " line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(space.n()) + " coordinates, got " +
                                        std::to_string(fields.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i] < 0 || fields[i] >= static_cast<std::int64_t>(space.p()))
                throw std::invalid_argument(what + " line " + std::to_string(line_no) +
                                            ": coordinate " + std::to_string(fields[i]) +
                                            " out of range [0, " + std::to_string(space.p()) +
                                            ")");
            coords[i] = static_cast<std::uint32_t>(fields[i]);
        }
        set.insert(space.encode(coords));
    }
    return set;
}

inline PointSet read_point_set_file(const std::string& path, const FieldSpace& space) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open point set file: " + path);
    return read_point_set(in, space, path);
}

inline void write_point(std::ostream& out, const FieldSpace& space, Point x) {
    auto coords = space.decode(x);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out << ',';
        out << coords[i];
    }
}

inline void write_point_set(std::ostream& out, const FieldSpace& space, const PointSet& set) {
    set.for_each([&](Point x) {
        write_point(out, space, x);
        out << '\n';
    });
}

inline void write_point_set_file(const std::string& path, const FieldSpace& space,
                                 const PointSet& set) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    write_point_set(out, space, set);
}

// "v r" header then r whitespace-separated rows of v integers.
inline ShapeSystem read_system(std::istream& in, std::uint32_t p,
                               const std::string& what = "system") {
    std::string line;
    int line_no = 0;
    std::vector<std::int64_t> header;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = strip_comment(line);
        if (body.empty()) continue;
        header = parse_int_fields(body, ' ', what, line_no);
        break;
    }
    if (header.size() != 2)
        throw std::invalid_argument(what + ": expected header 'v r'");
    std::int64_t v = header[0], r = header[1];
    if (v < 1 || r < 1 || v > 64 || r > 64)
        throw std::invalid_argument(what + ": header out of range (v, r in [1, 64])");
    std::vector<std::vector<std::int64_t>> rows;
    while (std::getline(in, line) && static_cast<std::int64_t>(rows.size()) < r) {
        ++line_no;
        std::string body = strip_comment(line);
        if (body.empty()) continue;
        auto fields = parse_int_fields(body, ' ', what, line_no);
        if (static_cast<std::int64_t>(fields.size()) != v)
            throw std::invalid_argument(what + " line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(v) + " coefficients, got " +
                                        std::to_string(fields.size()));
        rows.push_back(std::move(fields));
    }
    if (static_cast<std::int64_t>(rows.size()) != r)
        throw std::invalid_argument(what + ": expected " + std::to_string(r) + " rows, got " +
                                    std::to_string(rows.size()));
    return ShapeSystem::custom(std::move(rows), p);
}

inline ShapeSystem read_system_file(const std::string& path, std::uint32_t p) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open system file: " + path);
    return read_system(in, p, path);
}

// One tuple per line: v points, each n residues, all comma-separated (v * n fields).
inline std::vector<ShapeTuple> read_tuples(std::istream& in, const FieldSpace& space,
                                           int num_vars, const std::string& what = "tuple file") {
    std::vector<ShapeTuple> tuples;
    std::string line;
    int line_no = 0;
    const int per_line = num_vars * space.n();
    std::vector<std::uint32_t> coords(static_cast<std::size_t>(space.n()));
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = strip_comment(line);
        if (body.empty()) continue;
        auto fields = parse_int_fields(body, ',', what, line_no);
        if (static_cast<int>(fields.size()) != per_line)
            throw std::invalid_argument(what + " line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(per_line) + " residues (" +
                                        std::to_string(num_vars) + " points x " +
                                        std::to_string(space.n()) + " coordinates), got " +
                                        std::to_string(fields.size()));
        ShapeTuple tuple;
        tuple.reserve(static_cast<std::size_t>(num_vars));
        for (int j = 0; j < num_vars; ++j) {
            for (int i = 0; i < space.n(); ++i) {
                std::int64_t c = fields[static_cast<std::size_t>(j * space.n() + i)];
                if (c < 0 || c >= static_cast<std::int64_t>(space.p()))
                    throw std::invalid_argument(what + " line " + std::to_string(line_no) +
                                                ": coordinate " + std::to_string(c) +
                                                " out of range [0, " + std::to_string(space.p()) +
                                                ")");
                coords[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c);
            }
            tuple.push_back(space.encode(coords));
        }
        tuples.push_back(std::move(tuple));
    }
    return tuples;
}

inline std::vector<ShapeTuple> read_tuples_file(const std::string& path, const FieldSpace& space,
                                                int num_vars) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tuple file: " + path);
    return read_tuples(in, space, num_vars, path);
}

inline void write_tuple(std::ostream& out, const FieldSpace& space,
                        std::span<const Point> tuple) {
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        if (j) out << ',';
        write_point(out, space, tuple[j]);
    }
}

inline void write_tuples(std::ostream& out, const FieldSpace& space,
                         const std::vector<ShapeTuple>& tuples) {
    for (const auto& t : tuples) {
        write_tuple(out, space, t);
        out << '\n';
    }
}

}  // namespace io
}  // namespace kstar
