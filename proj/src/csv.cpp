// SPDX-License-Identifier: Apache-2.0
//
// risbf - joint active/passive beamforming for RIS-aided MIMO links
// Copyright (C) 2026 The risbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risbf/csv.hpp"

#include "risbf/types.hpp"

#include <boost/algorithm/string.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace risbf
{
    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    double parse_double(const std::string &text, const std::string &field)
    {
        std::string t = boost::algorithm::trim_copy(text);
        if (!t.empty() && t.front() == '+')
            t.erase(0, 1);
        if (t == "nan")
            return std::nan("");
        double v = 0.0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
            throw ConfigError(field + ": '" + text + "' is not a number");
        return v;
    }

    long long parse_integer(const std::string &text, const std::string &field)
    {
        const std::string t = boost::algorithm::trim_copy(text);
        long long v = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
            throw ConfigError(field + ": '" + text + "' is not an integer");
        return v;
    }

    std::vector<std::string> split_list(const std::string &text, char sep)
    {
        std::vector<std::string> parts;
        const std::string t = boost::algorithm::trim_copy(text);
        if (t.empty())
            return parts;
        boost::algorithm::split(parts, t, [sep](char c) { return c == sep; });
        for (auto &p : parts)
            boost::algorithm::trim(p);
        return parts;
    }

    std::size_t CsvTable::column(const std::string &name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw IoError("missing column '" + name + "'");
    }

    void write_csv(std::ostream &os, const CsvTable &table)
    {
        os << boost::algorithm::join(table.header, ",") << '\n';
        for (const auto &row : table.rows)
            os << boost::algorithm::join(row, ",") << '\n';
    }

    CsvTable read_csv(std::istream &is)
    {
        CsvTable t;
        std::string line;
        bool first = true;
        while (std::getline(is, line))
        {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            std::vector<std::string> cells;
            boost::algorithm::split(cells, line, [](char c) { return c == ','; });
            if (first)
            {
                t.header = std::move(cells);
                first = false;
            }
            else
            {
                if (cells.size() != t.header.size())
                    throw IoError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(t.header.size()));
                t.rows.push_back(std::move(cells));
            }
        }
        return t;
    }

    void write_csv_file(const std::string &path, const CsvTable &table)
    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw IoError("cannot open '" + path + "' for writing");
        write_csv(os, table);
        os.flush();
        if (!os)
            throw IoError("write to '" + path + "' failed");
    }

    CsvTable read_csv_file(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open '" + path + "' for reading");
        return read_csv(is);
    }
}
