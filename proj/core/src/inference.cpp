#include "coconsume/inference.hpp"

#include "coconsume/distributions.hpp"
#include "coconsume/error.hpp"
#include "csv.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace coconsume {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRankThreshold = 1e-10;

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parseNumber(const std::string &text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

Eigen::MatrixXd designMatrix(const Predictors &x, std::size_t n, bool intercept) {
    const auto k = static_cast<Eigen::Index>(x.size() + (intercept ? 1 : 0));
    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), k);
    Eigen::Index col = 0;
    if (intercept)
        design.col(col++).setOnes();
    for (const auto &column : x.columns) {
        if (column.size() != n)
            throw AnalysisError("predictor length does not match the response");
        design.col(col++) = Eigen::Map<const Eigen::VectorXd>(column.data(), static_cast<Eigen::Index>(n));
    }
    return design;
}

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> decompose(const Eigen::MatrixXd &design) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.rows(), design.cols());
    qr.setThreshold(kRankThreshold);
    qr.compute(design);
    return qr;
}

struct AuxiliaryFit {
    double rSquared = 0.0;
    Eigen::Index rank = 0;
};

/// Centered R^2 of regressing `y` on [1, columns]; tolerates rank deficiency
/// since only the fitted values (the projection) are needed.
AuxiliaryFit auxiliaryRSquared(const Eigen::VectorXd &y, const Eigen::MatrixXd &design) {
    const auto qr = decompose(design);
    const Eigen::VectorXd fitted = design * qr.solve(y);
    const double sse = (y - fitted).squaredNorm();
    const double sst = (y.array() - y.mean()).matrix().squaredNorm();
    AuxiliaryFit fit;
    fit.rank = qr.rank();
    fit.rSquared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 0.0;
    return fit;
}

Coefficient makeCoefficient(std::string name, double estimate, double se, double df) {
    Coefficient c;
    c.name = std::move(name);
    c.estimate = estimate;
    c.stdError = se;
    if (se > 0.0) {
        c.tStatistic = estimate / se;
        c.pValue = dist::studentTTwoSided(c.tStatistic, df);
    } else if (estimate == 0.0) {
        c.tStatistic = 0.0;
        c.pValue = 1.0;
    } else {
        c.tStatistic = std::copysign(std::numeric_limits<double>::infinity(), estimate);
        c.pValue = 0.0;
    }
    return c;
}

std::string fixed3(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3f", v);
    return buffer;
}

} // namespace

CovariateTable::CovariateTable(std::vector<std::string> keys) : keys_(std::move(keys)) {
    std::set<std::string> seen;
    for (const auto &k : keys_)
        if (!seen.insert(k).second)
            throw AnalysisError("duplicate covariate row for '" + k + "'");
}

CovariateTable CovariateTable::read(std::istream &in, char delimiter) {
    std::size_t line = 0;
    detail::CsvRecord record;
    do {
        if (!detail::readCsvRecord(in, line, record, delimiter))
            throw IoError("covariate table is empty");
    } while (record.blank);
    if (record.error)
        throw IoError("malformed covariate header: " + *record.error);
    if (record.fields.size() < 2)
        throw IoError("covariate table needs a key column and at least one value column");
    std::vector<std::string> header;
    for (auto &f : record.fields)
        header.push_back(trim(f));

    std::vector<std::string> keys;
    std::vector<std::vector<double>> values(header.size() - 1);
    while (detail::readCsvRecord(in, line, record, delimiter)) {
        if (record.blank)
            continue;
        if (record.error)
            throw IoError("covariate line " + std::to_string(record.line) + ": " + *record.error);
        if (record.fields.size() != header.size())
            throw IoError("covariate line " + std::to_string(record.line) + " has " +
                          std::to_string(record.fields.size()) + " fields, expected " +
                          std::to_string(header.size()));
        keys.push_back(trim(record.fields[0]));
        for (std::size_t c = 1; c < header.size(); ++c) {
            const std::string cell = trim(record.fields[c]);
            if (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN") {
                values[c - 1].push_back(kNaN);
                continue;
            }
            const auto number = parseNumber(cell);
            if (!number)
                throw IoError("covariate line " + std::to_string(record.line) + ": column '" + header[c] +
                              "' holds non-numeric '" + cell + "'");
            values[c - 1].push_back(*number);
        }
    }
    if (in.bad())
        throw IoError("read error on covariate table");
    CovariateTable table(std::move(keys));
    for (std::size_t c = 1; c < header.size(); ++c)
        table.setColumn(header[c], std::move(values[c - 1]));
    return table;
}

CovariateTable CovariateTable::readFile(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return read(in, path.extension() == ".tsv" ? '\t' : ',');
}

bool CovariateTable::hasColumn(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double> &CovariateTable::column(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
        throw AnalysisError("missing column '" + std::string(name) + "'");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
}

void CovariateTable::setColumn(std::string name, std::vector<double> values) {
    if (values.size() != keys_.size())
        throw AnalysisError("column '" + name + "' has " + std::to_string(values.size()) + " values for " +
                            std::to_string(keys_.size()) + " rows");
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) {
        columns_[static_cast<std::size_t>(it - names_.begin())] = std::move(values);
        return;
    }
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
}

void CovariateTable::joinColumn(std::string name, const std::map<std::string, double> &values) {
    std::vector<double> column;
    column.reserve(keys_.size());
    for (const auto &k : keys_) {
        const auto it = values.find(k);
        column.push_back(it == values.end() ? kNaN : it->second);
    }
    setColumn(std::move(name), std::move(column));
}

CovariateTable CovariateTable::completeRows(std::span<const std::string> columns) const {
    std::vector<const std::vector<double> *> refs;
    for (const auto &name : columns)
        refs.push_back(&column(name));
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < keys_.size(); ++r)
        if (std::all_of(refs.begin(), refs.end(), [r](const auto *col) { return std::isfinite((*col)[r]); }))
            keep.push_back(r);
    std::vector<std::string> keys;
    for (std::size_t r : keep)
        keys.push_back(keys_[r]);
    CovariateTable out(std::move(keys));
    for (std::size_t c = 0; c < names_.size(); ++c) {
        std::vector<double> col;
        for (std::size_t r : keep)
            col.push_back(columns_[c][r]);
        out.setColumn(names_[c], std::move(col));
    }
    return out;
}

CovariateTable rescaleUnit(const CovariateTable &table, std::span<const std::string> columns) {
    CovariateTable out = table;
    for (const auto &name : columns) {
        auto values = table.column(name);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double v : values) {
            if (std::isnan(v))
                continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo))
            throw AnalysisError("column '" + name + "' is constant and cannot be rescaled");
        for (double &v : values)
            v = (v - lo) / (hi - lo);
        out.setColumn(name, std::move(values));
    }
    return out;
}

Predictors Predictors::fromTable(const CovariateTable &table, std::span<const std::string> names) {
    Predictors p;
    for (const auto &name : names) {
        p.names.push_back(name);
        p.columns.push_back(table.column(name));
    }
    return p;
}

RegressionResult olsFit(std::span<const double> y, const Predictors &x, bool intercept) {
    const std::size_t n = y.size();
    const std::size_t p = x.size();
    if (intercept ? n <= p + 1 : n <= p)
        throw AnalysisError("need more observations than parameters: n = " + std::to_string(n) + ", p = " +
                            std::to_string(p));
    if (!intercept && p == 0)
        throw AnalysisError("a model without intercept needs at least one predictor");
    for (double v : y)
        if (!std::isfinite(v))
            throw AnalysisError("response contains a non-finite value");

    const Eigen::MatrixXd design = designMatrix(x, n, intercept);
    if (!design.allFinite())
        throw AnalysisError("predictors contain a non-finite value");
    const Eigen::Map<const Eigen::VectorXd> response(y.data(), static_cast<Eigen::Index>(n));
    const auto k = design.cols();
    const auto qr = decompose(design);

    std::vector<std::string> names;
    if (intercept)
        names.emplace_back("(intercept)");
    names.insert(names.end(), x.names.begin(), x.names.end());
    if (qr.rank() < k) {
        std::string dropped;
        for (Eigen::Index i = qr.rank(); i < k; ++i) {
            if (!dropped.empty())
                dropped += ", ";
            dropped += names[static_cast<std::size_t>(qr.colsPermutation().indices()[i])];
        }
        throw RankDeficiencyError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                                  std::to_string(k) + "); collinear columns: " + dropped);
    }

    const Eigen::VectorXd beta = qr.solve(response);
    const Eigen::VectorXd fitted = design * beta;
    const Eigen::VectorXd residuals = response - fitted;
    const double sse = residuals.squaredNorm();
    const double df = static_cast<double>(n) - static_cast<double>(k);
    const double sigma2 = sse / df;

    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rInv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd permuted = rInv * rInv.transpose();
    const Eigen::MatrixXd unscaledCov = qr.colsPermutation() * permuted * qr.colsPermutation().transpose();

    RegressionResult result;
    result.n = n;
    result.residualDf = df;
    result.sigma = std::sqrt(sigma2);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double se = std::sqrt(std::max(0.0, sigma2 * unscaledCov(i, i)));
        auto coef = makeCoefficient(names[static_cast<std::size_t>(i)], beta(i), se, df);
        if (intercept && i == 0)
            result.intercept = std::move(coef);
        else
            result.predictors.push_back(std::move(coef));
    }

    const double sst = intercept ? (response.array() - response.mean()).matrix().squaredNorm()
                                 : response.squaredNorm();
    result.rSquared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 0.0;
    const double nn = static_cast<double>(n);
    const double pp = static_cast<double>(p);
    result.adjustedRSquared = intercept ? 1.0 - (1.0 - result.rSquared) * (nn - 1.0) / (nn - pp - 1.0)
                                        : 1.0 - (1.0 - result.rSquared) * nn / (nn - pp);
    result.fitted.assign(fitted.data(), fitted.data() + fitted.size());
    result.residuals.assign(residuals.data(), residuals.data() + residuals.size());
    return result;
}

std::vector<double> varianceInflation(const Predictors &x) {
    const std::size_t p = x.size();
    if (p < 2)
        throw AnalysisError("variance inflation needs at least two predictors");
    const std::size_t n = x.rows();
    std::vector<double> result;
    result.reserve(p);
    for (std::size_t j = 0; j < p; ++j) {
        Predictors others;
        for (std::size_t c = 0; c < p; ++c)
            if (c != j) {
                others.names.push_back(x.names[c]);
                others.columns.push_back(x.columns[c]);
            }
        const Eigen::MatrixXd base = designMatrix(others, n, true);
        Eigen::MatrixXd augmented(base.rows(), base.cols() + 1);
        augmented << base, Eigen::Map<const Eigen::VectorXd>(x.columns[j].data(), static_cast<Eigen::Index>(n));
        const Eigen::Map<const Eigen::VectorXd> target(x.columns[j].data(), static_cast<Eigen::Index>(n));

        const auto fit = auxiliaryRSquared(target, base);
        // Column j adds nothing to the span of the others: perfectly explained.
        if (decompose(augmented).rank() <= fit.rank || fit.rSquared >= 1.0) {
            result.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        result.push_back(1.0 / (1.0 - fit.rSquared));
    }
    return result;
}

ScoreTest bpScoreTest(const RegressionResult &result, const Predictors &x) {
    const std::size_t n = result.residuals.size();
    if (x.rows() != n)
        throw AnalysisError("score test predictors do not match the fitted sample");
    ScoreTest test;
    test.df = static_cast<double>(x.size());
    double sse = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sse += result.residuals[i] * result.residuals[i];
        scale += result.fitted.empty() ? 0.0 : result.fitted[i] * result.fitted[i];
    }
    if (sse <= 1e-28 * std::max(1.0, scale) || x.size() == 0)
        return test;

    const double meanSquare = sse / static_cast<double>(n);
    Eigen::VectorXd scaled(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        scaled(static_cast<Eigen::Index>(i)) = result.residuals[i] * result.residuals[i] / meanSquare;
    const auto fit = auxiliaryRSquared(scaled, designMatrix(x, n, true));
    test.statistic = static_cast<double>(n) * fit.rSquared;
    test.pValue = dist::chiSquaredUpper(test.statistic, test.df);
    return test;
}

std::string significanceStars(double pValue) {
    if (pValue < 0.001)
        return "***";
    if (pValue < 0.01)
        return "**";
    if (pValue < 0.05)
        return "*";
    return "";
}

ModelKind parseModelKind(std::string_view name) {
    if (name == "full")
        return ModelKind::Full;
    if (name == "nonculture")
        return ModelKind::NonCulture;
    if (name == "culture")
        return ModelKind::Culture;
    throw IoError("unknown model '" + std::string(name) + "' (expected full, nonculture or culture)");
}

std::string_view toString(ModelKind kind) {
    switch (kind) {
    case ModelKind::Full:
        return "full";
    case ModelKind::NonCulture:
        return "nonculture";
    case ModelKind::Culture:
        return "culture";
    }
    return "full";
}

std::vector<std::string> ModelSpec::columnsFor(ModelKind kind) const {
    std::vector<std::string> cols;
    if (kind != ModelKind::Culture)
        cols.insert(cols.end(), nonCultural.begin(), nonCultural.end());
    if (kind != ModelKind::NonCulture)
        cols.insert(cols.end(), cultural.begin(), cultural.end());
    cols.insert(cols.end(), extraControls.begin(), extraControls.end());
    return cols;
}

StandardModels runStandardModels(const CovariateTable &covariates, std::string_view outcome,
                           const std::map<std::string, double> &scores, const ModelSpec &spec) {
    const std::string outcomeName(outcome);
    if (covariates.hasColumn(outcomeName))
        throw AnalysisError("outcome '" + outcomeName + "' collides with a covariate column");
    // The common sample covers the columns of the requested models only.
    std::vector<std::string> all;
    for (const auto &name : spec.columnsFor(ModelKind::Full))
        if (std::any_of(spec.models.begin(), spec.models.end(), [&](ModelKind kind) {
                const auto cols = spec.columnsFor(kind);
                return std::find(cols.begin(), cols.end(), name) != cols.end();
            }))
            all.push_back(name);
    for (const auto &name : all)
        covariates.column(name); // names the first missing column

    CovariateTable joined = covariates;
    joined.joinColumn(outcomeName, scores);
    std::vector<std::string> used = all;
    used.push_back(outcomeName);
    const CovariateTable sample = rescaleUnit(joined.completeRows(used), used);

    StandardModels models;
    models.outcome = outcomeName;
    models.countries = sample.keys();
    const auto &y = sample.column(outcomeName);
    for (ModelKind kind : spec.models) {
        const auto predictors = Predictors::fromTable(sample, spec.columnsFor(kind));
        auto result = olsFit(y, predictors, true);
        if (predictors.size() >= 2) {
            const auto inflation = varianceInflation(predictors);
            for (std::size_t j = 0; j < inflation.size(); ++j)
                result.predictors[j].vif = inflation[j];
        }
        result.heteroscedasticity = bpScoreTest(result, predictors);
        models.models.push_back({kind, std::move(result)});
    }
    return models;
}

Table regressionTable(const StandardModels &models) {
    Table table{{"model", "term", "estimate", "std_error", "t_statistic", "p_value", "stars", "vif"}, {}};
    const Cell na{};
    for (const auto &[kind, r] : models.models) {
        const std::string model(toString(kind));
        auto addCoef = [&](const Coefficient &c) {
            table.rows.push_back({model, c.name, c.estimate, c.stdError, c.tStatistic, c.pValue,
                                  significanceStars(c.pValue), c.vif ? Cell(*c.vif) : na});
        };
        if (r.intercept)
            addCoef(*r.intercept);
        for (const auto &c : r.predictors)
            addCoef(c);
        auto addFit = [&](const char *name, Cell value) {
            table.rows.push_back({model, std::string(name), std::move(value), na, na, na, std::string(), na});
        };
        addFit("n", static_cast<std::int64_t>(r.n));
        addFit("r_squared", r.rSquared);
        addFit("adj_r_squared", r.adjustedRSquared);
        if (r.heteroscedasticity) {
            addFit("bp_statistic", r.heteroscedasticity->statistic);
            addFit("bp_p_value", r.heteroscedasticity->pValue);
        }
    }
    return table;
}

std::string formatRegressionText(const StandardModels &models) {
    std::vector<std::string> terms{"(intercept)"};
    for (const auto &[kind, r] : models.models)
        for (const auto &c : r.predictors)
            if (std::find(terms.begin(), terms.end(), c.name) == terms.end())
                terms.push_back(c.name);

    auto cellFor = [](const Coefficient &c) {
        return fixed3(c.estimate) + significanceStars(c.pValue) + " (" + fixed3(c.stdError) + ")";
    };
    std::vector<std::string> header{""};
    std::vector<std::vector<std::string>> body;
    for (const auto &[kind, r] : models.models) {
        switch (kind) {
        case ModelKind::Full:
            header.emplace_back("Full model");
            break;
        case ModelKind::NonCulture:
            header.emplace_back("Non-culture model");
            break;
        case ModelKind::Culture:
            header.emplace_back("Culture model");
            break;
        }
    }
    for (const auto &term : terms) {
        std::vector<std::string> row{term == "(intercept)" ? "Intercept" : term};
        for (const auto &[kind, r] : models.models) {
            const Coefficient *found = nullptr;
            if (term == "(intercept)" && r.intercept)
                found = &*r.intercept;
            for (const auto &c : r.predictors)
                if (c.name == term)
                    found = &c;
            row.push_back(found ? cellFor(*found) : "");
        }
        body.push_back(std::move(row));
    }
    auto fitRow = [&](std::string label, auto value) {
        std::vector<std::string> row{std::move(label)};
        for (const auto &fm : models.models)
            row.push_back(value(fm.result));
        body.push_back(std::move(row));
    };
    fitRow("Sample size", [](const RegressionResult &r) { return std::to_string(r.n); });
    fitRow("R^2", [](const RegressionResult &r) { return fixed3(r.rSquared); });
    fitRow("Adjusted R^2", [](const RegressionResult &r) { return fixed3(r.adjustedRSquared); });
    fitRow("Score test chi2 (p)", [](const RegressionResult &r) {
        if (!r.heteroscedasticity)
            return std::string();
        return fixed3(r.heteroscedasticity->statistic) + " (" + fixed3(r.heteroscedasticity->pValue) + ")";
    });
    fitRow("Max VIF", [](const RegressionResult &r) {
        double top = 0.0;
        bool any = false;
        for (const auto &c : r.predictors)
            if (c.vif) {
                top = std::max(top, *c.vif);
                any = true;
            }
        return any ? fixed3(top) : std::string();
    });

    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&width](const std::vector<std::string> &row) {
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    };
    measure(header);
    for (const auto &row : body)
        measure(row);

    std::ostringstream out;
    out << "OLS regression of " << models.outcome << " among " << models.countries.size()
        << " countries (all variables rescaled to the unit interval)\n";
    auto emit = [&](const std::vector<std::string> &row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size())
                out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    };
    emit(header);
    for (const auto &row : body)
        emit(row);
    out << "Note: * p < .05, ** p < .01, *** p < .001. Unstandardized coefficients with standard errors in "
           "parentheses.\n";
    return out.str();
}

} // namespace coconsume
