#include "sessionlink/corpus.h"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "sessionlink/errors.h"
#include "sessionlink/synthetic.h"
#include "test_util.h"

namespace sessionlink {
namespace {

using testing::kMsnbcHeader;

std::vector<int> Categories(const UserLog& user) {
  std::vector<int> out;
  for (const PageVisit& v : user.visits) out.push_back(*v.category);
  return out;
}

TEST(ParseMsnbc, ReadsSequencesAsListed) {
  std::istringstream in(std::string(kMsnbcHeader) +
                        "1 3 5 1 3 4 4\n1 3 7\n5 7 9 14 15\n");
  const Corpus corpus = ParseMsnbc(in);
  ASSERT_EQ(corpus.size(), 3u);
  EXPECT_EQ(Categories(corpus.users()[0]), (std::vector<int>{1, 3, 5, 1, 3, 4, 4}));
  EXPECT_EQ(Categories(corpus.users()[1]), (std::vector<int>{1, 3, 7}));
  EXPECT_EQ(Categories(corpus.users()[2]), (std::vector<int>{5, 7, 9, 14, 15}));
  EXPECT_EQ(corpus.users()[2].user_id, "3");
  EXPECT_EQ(corpus.category_table()->size(), 17u);
  EXPECT_EQ(corpus.category_table()->names[0], "frontpage");
  EXPECT_EQ(corpus.channels().ToString(), "category");
}

TEST(ParseMsnbc, SingleVisit) {
  std::istringstream in(std::string(kMsnbcHeader) + "1\n");
  const Corpus corpus = ParseMsnbc(in);
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(Categories(corpus.users()[0]), std::vector<int>{1});
}

TEST(ParseMsnbc, ReportsLineOfBadToken) {
  std::istringstream in(std::string(kMsnbcHeader) + "1 2\n3 x\n");
  try {
    ParseMsnbc(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 8u);
  }
}

TEST(ParseMsnbc, RejectsOutOfRangeCategory) {
  std::istringstream in(std::string(kMsnbcHeader) + "18\n");
  EXPECT_THROW(ParseMsnbc(in), ParseError);
  std::istringstream zero(std::string(kMsnbcHeader) + "0\n");
  EXPECT_THROW(ParseMsnbc(zero), ParseError);
}

TEST(ParseMsnbc, RejectsWrongHeader) {
  std::istringstream in("a b c\n1 2\n");
  EXPECT_THROW(ParseMsnbc(in), ParseError);
}

TEST(ParseMsnbc, EmptyStream) {
  std::istringstream in("");
  EXPECT_THROW(ParseMsnbc(in), EmptyCorpusError);
  std::istringstream header_only(kMsnbcHeader);
  EXPECT_THROW(ParseMsnbc(header_only), EmptyCorpusError);
}

TEST(ParseMsnbc, RoundTrip) {
  const Corpus corpus = testing::CategoryCorpus({{1, 2, 3}, {17, 17}, {4}});
  std::stringstream buffer;
  WriteMsnbc(corpus, buffer);
  const Corpus parsed = ParseMsnbc(buffer);
  ASSERT_EQ(parsed.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(parsed.users()[i].visits, corpus.users()[i].visits);
  }
  EXPECT_EQ(parsed.category_table(), corpus.category_table());
}

TEST(ParsePageRecords, ExtractsDomainsAndTags) {
  std::istringstream in(
      R"({"user_id":"a","url":"https://en.wikipedia.org/x","tags":["design","tools"]})"
      "\n"
      R"({"user_id":"a","url":"https://github.com/y","tokens":["hello"]})"
      "\n");
  const Corpus corpus = ParsePageRecords(in);
  ASSERT_EQ(corpus.size(), 1u);
  const UserLog& a = corpus.users()[0];
  EXPECT_EQ(a.user_id, "a");
  ASSERT_EQ(a.visits.size(), 2u);
  EXPECT_EQ(*a.visits[0].domain, "en.wikipedia.org");
  EXPECT_EQ(*a.visits[1].domain, "github.com");
  EXPECT_EQ(*a.visits[0].tags, (std::vector<std::string>{"design", "tools"}));
  EXPECT_TRUE(a.visits[1].tags->empty());
  EXPECT_EQ(*a.visits[1].tokens, std::vector<std::string>{"hello"});
}

TEST(ParsePageRecords, DropsUnparsableUrlWithWarning) {
  std::istringstream in(
      R"({"user_id":"a","url":"not a url"})"
      "\n"
      R"({"user_id":"a","url":"http://ok.example/"})"
      "\n");
  std::vector<std::string> warnings;
  const Corpus corpus = ParsePageRecords(in, &warnings);
  EXPECT_EQ(corpus.total_visits(), 1u);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("line 1"), std::string::npos);
}

TEST(ParsePageRecords, MissingFieldsAreParseErrors) {
  std::istringstream no_user(R"({"url":"http://a.com/"})");
  EXPECT_THROW(ParsePageRecords(no_user), ParseError);
  std::istringstream no_url(R"({"user_id":"a"})");
  EXPECT_THROW(ParsePageRecords(no_url), ParseError);
  std::istringstream bad_json("{");
  EXPECT_THROW(ParsePageRecords(bad_json), ParseError);
}

TEST(ParsePageRecords, EmptyStream) {
  std::istringstream in("\n\n");
  EXPECT_THROW(ParsePageRecords(in), EmptyCorpusError);
}

TEST(ParsePageRecords, RoundTrip) {
  using testing::TagVisit;
  std::vector<UserLog> users = {
      {"x", {TagVisit("a.com", {"design"}), TagVisit("b.org", {"tools", "web"})}},
      {"y", {TagVisit("c.net", {})}}};
  const Corpus corpus(users, std::nullopt);
  std::stringstream buffer;
  WritePageRecords(corpus, buffer);
  EXPECT_EQ(ParsePageRecords(buffer), corpus);
}

TEST(ExtractHostname, Cases) {
  EXPECT_EQ(ExtractHostname("https://en.wikipedia.org/wiki/X"), "en.wikipedia.org");
  EXPECT_EQ(ExtractHostname("http://User:pw@WWW.Example.COM:8080/a?b"),
            "www.example.com");
  EXPECT_EQ(ExtractHostname("http://example.com"), "example.com");
  EXPECT_EQ(ExtractHostname("ftp://files.example.com#frag"), "files.example.com");
  EXPECT_EQ(ExtractHostname("example.com/path"), std::nullopt);
  EXPECT_EQ(ExtractHostname("http:///path"), std::nullopt);
  EXPECT_EQ(ExtractHostname(""), std::nullopt);
}

TEST(Corpus, ValidatesInvariants) {
  using testing::CategoryVisits;
  EXPECT_THROW(Corpus({}, std::nullopt), EmptyCorpusError);
  EXPECT_THROW(Corpus({{"a", {}}}, testing::NumberedTable(3)), InvalidSpecError);
  EXPECT_THROW(Corpus({{"a", CategoryVisits({1})}, {"a", CategoryVisits({2})}},
                      testing::NumberedTable(3)),
               InvalidSpecError);
  EXPECT_THROW(Corpus({{"a", CategoryVisits({4})}}, testing::NumberedTable(3)),
               InvalidSpecError);
  std::vector<PageVisit> mixed = CategoryVisits({1});
  mixed.push_back(testing::TagVisit("a.com", {}));
  EXPECT_THROW(Corpus({{"a", mixed}}, testing::NumberedTable(3)), InvalidSpecError);
}

TEST(CorpusStats, DirectCount) {
  const Corpus corpus = testing::CategoryCorpus({{1, 1, 2}});
  const StatsReport stats = CorpusStats(corpus);
  EXPECT_EQ(stats.users, 1u);
  EXPECT_EQ(stats.total_visits, 3u);
  ASSERT_EQ(stats.category_proportion.size(), 17u);
  EXPECT_DOUBLE_EQ(stats.category_proportion[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(stats.category_proportion[1], 1.0 / 3.0);
  for (std::size_t i = 2; i < 17; ++i) EXPECT_EQ(stats.category_proportion[i], 0.0);
  EXPECT_EQ(stats.category_frequency[0], 2u);
}

TEST(CorpusStats, RanksDomainsAndTags) {
  using testing::TagVisit;
  const Corpus corpus({{"x",
                        {TagVisit("b.com", {"design"}), TagVisit("a.com", {"tools"}),
                         TagVisit("b.com", {"design", "web"}),
                         TagVisit("c.com", {"tools"})}}},
                      std::nullopt);
  const StatsReport stats = CorpusStats(corpus, 2);
  EXPECT_EQ(stats.top_domains,
            (std::vector<RankedCount>{{"b.com", 2}, {"a.com", 1}}));
  EXPECT_EQ(stats.top_tags, (std::vector<RankedCount>{{"design", 2}, {"tools", 2}}));
  EXPECT_TRUE(stats.category_proportion.empty());
}

TEST(CorpusStats, TextTableHasOneRowPerCategory) {
  std::istringstream in(std::string(kMsnbcHeader) + "1 3 5\n1\n");
  std::ostringstream out;
  WriteStats(CorpusStats(ParseMsnbc(in)), out);
  const std::string text = out.str();
  EXPECT_NE(text.find("frontpage\t2\t0.500\n"), std::string::npos);
  EXPECT_NE(text.find("travel\t0\t0.000\n"), std::string::npos);
}

SyntheticSpec Spec(SyntheticKind kind, int users, int visits) {
  SyntheticSpec spec;
  spec.kind = kind;
  spec.users = users;
  spec.visits_per_user = visits;
  return spec;
}

TEST(Synthetic, DisjointSupports) {
  const Corpus corpus =
      GenerateSynthetic(Spec(SyntheticKind::kDisjointCategories, 10, 40), 5);
  ASSERT_EQ(corpus.size(), 10u);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ASSERT_EQ(corpus.users()[i].visits.size(), 40u);
    for (const PageVisit& v : corpus.users()[i].visits) {
      EXPECT_EQ(*v.category, static_cast<int>(i) + 1);
    }
  }
}

TEST(Synthetic, SameSeedSameBytes) {
  for (SyntheticKind kind : {SyntheticKind::kUniformCategories,
                             SyntheticKind::kCategoryMixture}) {
    std::ostringstream a;
    std::ostringstream b;
    WriteMsnbc(GenerateSynthetic(Spec(kind, 30, 25), 11), a);
    WriteMsnbc(GenerateSynthetic(Spec(kind, 30, 25), 11), b);
    EXPECT_EQ(a.str(), b.str());
  }
  std::ostringstream a;
  std::ostringstream b;
  WritePageRecords(GenerateSynthetic(Spec(SyntheticKind::kTagMixture, 30, 25), 11), a);
  WritePageRecords(GenerateSynthetic(Spec(SyntheticKind::kTagMixture, 30, 25), 11), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Synthetic, UniformProportionsNearUniform) {
  const Corpus corpus =
      GenerateSynthetic(Spec(SyntheticKind::kUniformCategories, 20, 40), 3);
  std::map<int, int> counts;
  int total = 0;
  for (const UserLog& u : corpus.users()) {
    for (const PageVisit& v : u.visits) {
      ++counts[*v.category];
      ++total;
    }
  }
  ASSERT_EQ(total, 800);
  for (int c = 1; c <= 17; ++c) {
    EXPECT_NEAR(static_cast<double>(counts[c]) / total, 1.0 / 17, 0.03) << c;
  }
}

TEST(Synthetic, TagMixtureCarriesPageRecordChannels) {
  const Corpus corpus =
      GenerateSynthetic(Spec(SyntheticKind::kTagMixture, 5, 10), 2);
  EXPECT_TRUE(corpus.channels().Has(Channel::kDomain));
  EXPECT_TRUE(corpus.channels().Has(Channel::kTags));
  EXPECT_FALSE(corpus.channels().Has(Channel::kCategory));
}

TEST(Synthetic, RejectsImpossibleSpecs) {
  EXPECT_THROW(GenerateSynthetic(Spec(SyntheticKind::kUniformCategories, 0, 5), 1),
               InvalidSpecError);
  EXPECT_THROW(GenerateSynthetic(Spec(SyntheticKind::kDisjointCategories, 18, 5), 1),
               InvalidSpecError);
}

TEST(Synthetic, SpecJsonRoundTrip) {
  SyntheticSpec spec = Spec(SyntheticKind::kTagMixture, 7, 9);
  spec.background = 0.25;
  spec.seed = 42;
  const SyntheticSpec back = SyntheticSpecFromJson(SyntheticSpecToJson(spec));
  EXPECT_EQ(SyntheticSpecToJson(back), SyntheticSpecToJson(spec));
}

}  // namespace
}  // namespace sessionlink
