#include "sirlab/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sirlab/errors.hpp"

namespace sirlab {

Dataset::Dataset(Eigen::MatrixXd x_, Eigen::VectorXd y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.rows() != y.size()) throw InvalidInput("Dataset: X rows and Y length differ");
    if (x.rows() < 1) throw InvalidInput("Dataset: need at least one observation");
    if (!x.allFinite()) throw InvalidInput("Dataset: X has non-finite entries");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (std::isnan(y(i))) throw InvalidInput("Dataset: Y has NaN entries");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t k = 0;
        while (k < cell.size() && cell[k] == ' ') ++k;
        out.push_back(cell.substr(k));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw InvalidInput("CSV: non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                           ", column " + std::to_string(col));
    return v;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("CSV: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("CSV: empty file '" + path + "'");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "y")
        throw InvalidInput("CSV: header must be x1,...,xp,y");
    const std::size_t p = header.size() - 1;
    for (std::size_t j = 0; j < p; ++j)
        if (header[j] != "x" + std::to_string(j + 1))
            throw InvalidInput("CSV: header column " + std::to_string(j + 1) + " must be x" +
                               std::to_string(j + 1));

    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t row = 1;  // header is row 0
    while (std::getline(in, line)) {
        if (line.empty()) {
            ++row;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != p + 1)
            throw InvalidInput("CSV: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(p + 1));
        for (std::size_t j = 0; j < p; ++j) xs.push_back(parse_cell(cells[j], row, j + 1));
        ys.push_back(parse_cell(cells[p], row, p + 1));
        ++row;
    }
    if (ys.empty()) throw InvalidInput("CSV: no data rows in '" + path + "'");

    const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j)
            x(i, j) = xs[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)];
    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ys.data(), n);
    return Dataset(std::move(x), std::move(y));
}

}  // namespace sirlab
