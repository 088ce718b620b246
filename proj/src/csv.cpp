#include "hsi/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hsi {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

bool is_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SpectrumCsv read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    SpectrumCsv out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cells = split_commas(t);
        if (cells.size() != 2)
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + " expected wavelength,value");
        double w, v;
        if (!is_number(cells[0], w) || !is_number(cells[1], v)) {
            if (lineno == 1) continue; // header line
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + " non-numeric cell");
        }
        out.wavelengths.push_back(w);
        out.values.push_back(v);
    }
    if (out.values.empty()) throw Error(ErrorCode::ParseError, path.string() + " holds no samples");
    return out;
}

SpectraTable read_spectra_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::ParseError, path.string() + " is empty");
    auto header = split_commas(trim(line));
    if (header.size() < 2)
        throw Error(ErrorCode::ParseError, path.string() + " header needs wavelength plus names");
    SpectraTable table;
    table.names.assign(header.begin() + 1, header.end());

    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cells = split_commas(t);
        if (cells.size() != header.size())
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!is_number(cells[i], row[i]))
                throw Error(ErrorCode::ParseError,
                            path.string() + ":" + std::to_string(lineno) + " non-numeric cell \"" +
                                cells[i] + "\"");
        table.wavelengths.push_back(row[0]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::ParseError, path.string() + " holds no samples");
    table.spectra.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(table.names.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < table.names.size(); ++c)
            table.spectra(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c + 1];
    return table;
}

void write_spectra_csv(const std::filesystem::path& path, const std::vector<double>& wavelengths,
                       const std::vector<std::string>& names, const Matrix& spectra) {
    if (static_cast<Eigen::Index>(wavelengths.size()) != spectra.rows() ||
        static_cast<Eigen::Index>(names.size()) != spectra.cols())
        throw Error(ErrorCode::DimMismatch, "spectra table shape disagrees with labels");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << "wavelength";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    for (Eigen::Index r = 0; r < spectra.rows(); ++r) {
        out << fmt(wavelengths[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < spectra.cols(); ++c) out << "," << fmt(spectra(r, c));
        out << "\n";
    }
    if (!out) throw Error(ErrorCode::IoFailure, "short write on " + path.string());
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cells = split_commas(t);
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!is_number(cells[i], row[i]))
                throw Error(ErrorCode::ParseError,
                            path.string() + ":" + std::to_string(lineno) + " non-numeric cell");
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + " ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::ParseError, path.string() + " holds no rows");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.front().size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

} // namespace hsi
