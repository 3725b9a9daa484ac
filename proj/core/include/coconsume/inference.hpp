#pragma once

#include "coconsume/table.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coconsume {

/**
 * Country-keyed numeric columns (Hofstede scores, log GDP, language centrality,
 * Internet users, optional controls). Missing cells are stored as NaN so that
 * the complete-case sample can be chosen per analysis.
 */
class CovariateTable {
public:
    CovariateTable() = default;
    /// Throws AnalysisError on duplicate keys.
    explicit CovariateTable(std::vector<std::string> keys);

    /// First column holds the key; every other column must be numeric, with empty
    /// cells, "NA" and "nan" read as missing. Delimiter is ',' or '\t'.
    static CovariateTable read(std::istream &in, char delimiter = ',');
    /// Picks the delimiter from the extension (.tsv means tab).
    static CovariateTable readFile(const std::filesystem::path &path);

    const std::vector<std::string> &keys() const { return keys_; }
    const std::vector<std::string> &columnNames() const { return names_; }
    std::size_t rowCount() const { return keys_.size(); }

    bool hasColumn(std::string_view name) const;
    /// Throws AnalysisError naming the column when it is absent.
    const std::vector<double> &column(std::string_view name) const;
    void setColumn(std::string name, std::vector<double> values);

    /// Adds (or replaces) a column from a key -> value map; keys missing from the
    /// map become NaN.
    void joinColumn(std::string name, const std::map<std::string, double> &values);

    /// Rows where every listed column is finite. Throws if a column is absent.
    CovariateTable completeRows(std::span<const std::string> columns) const;

private:
    std::vector<std::string> keys_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

/// Min-max rescaling of the listed columns to [0, 1]. Throws AnalysisError
/// naming the first constant column.
CovariateTable rescaleUnit(const CovariateTable &table, std::span<const std::string> columns);

/// Named predictor columns of equal length.
struct Predictors {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t size() const { return columns.size(); }

    static Predictors fromTable(const CovariateTable &table, std::span<const std::string> names);
};

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double stdError = 0.0;
    double tStatistic = 0.0;
    double pValue = 1.0;
    std::optional<double> vif;
};

struct ScoreTest {
    double statistic = 0.0;
    double df = 0.0;
    double pValue = 1.0;
};

struct RegressionResult {
    std::optional<Coefficient> intercept;
    std::vector<Coefficient> predictors;
    std::size_t n = 0;
    double residualDf = 0.0;
    double rSquared = 0.0;
    double adjustedRSquared = 0.0;
    double sigma = 0.0; ///< residual standard error
    std::vector<double> fitted;
    std::vector<double> residuals;
    std::optional<ScoreTest> heteroscedasticity;
};

/**
 * Least squares through a column-pivoted Householder QR. Standard errors come
 * from sigma^2 (X'X)^-1 and p-values from the two-sided t distribution with
 * n - p - 1 degrees of freedom (n - p without intercept).
 *
 * Throws AnalysisError when n <= p + 1 and RankDeficiencyError, naming the
 * dependent columns, when X is not of full column rank.
 */
RegressionResult olsFit(std::span<const double> y, const Predictors &x, bool intercept = true);

/// 1 / (1 - R_j^2) from regressing each column on the others with an intercept.
/// Perfectly explained columns get +inf. Needs at least two predictors.
std::vector<double> varianceInflation(const Predictors &x);

/**
 * Score test for non-constant variance: squared residuals scaled by their mean are
 * regressed on X with an intercept; the statistic is n R^2 of that auxiliary fit
 * and is referred to chi-squared with p degrees of freedom. All-zero residuals
 * give (0, p = 1).
 */
ScoreTest bpScoreTest(const RegressionResult &result, const Predictors &x);

/// "*", "**", "***" at .05, .01, .001.
std::string significanceStars(double pValue);

enum class ModelKind { Full, NonCulture, Culture };

ModelKind parseModelKind(std::string_view name);
std::string_view toString(ModelKind kind);

struct ModelSpec {
    std::vector<std::string> nonCultural{"log10_gdp_pc", "language_evc", "internet_users"};
    std::vector<std::string> cultural{"IDV", "UAI", "PDI", "MAS"};
    /// Appended to every model, e.g. migration_degree.
    std::vector<std::string> extraControls;
    std::vector<ModelKind> models{ModelKind::Full, ModelKind::NonCulture, ModelKind::Culture};

    std::vector<std::string> columnsFor(ModelKind kind) const;
};

struct FittedModel {
    ModelKind kind;
    RegressionResult result;
};

struct StandardModels {
    std::string outcome;
    std::vector<std::string> countries; ///< the complete-case sample shared by all models
    std::vector<FittedModel> models;
};

/**
 * Joins `outcome` scores onto the covariates, keeps countries with every
 * referenced column present, rescales all variables (outcome included) to the
 * unit interval and fits the requested models on that common sample, with VIF
 * (for models with two or more predictors) and the score test attached.
 */
StandardModels runStandardModels(const CovariateTable &covariates, std::string_view outcome,
                           const std::map<std::string, double> &scores, const ModelSpec &spec = {});

/// Long form: model, term, estimate, std_error, t_statistic, p_value, stars, vif,
/// followed by fit rows (n, r_squared, adj_r_squared, bp_statistic, bp_p_value).
Table regressionTable(const StandardModels &models);

/// Side-by-side layout with coefficients, standard errors in parentheses, stars
/// and fit indices.
std::string formatRegressionText(const StandardModels &models);

} // namespace coconsume
