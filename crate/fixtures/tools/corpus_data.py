"""Hand-written fixture corpus: two editions, three volumes each, two pages
per volume.

Paragraph kinds:
  B  bold headword + rest           -> entry, strategy bold
  I  plain text, index word         -> entry, strategy index
  C  plain text, not in the index   -> entry, strategy classifier
  T  continuation of the previous entry
  S  numbered subentry, kept with the previous entry
  O  continuation at the start of a volume (dropped)
  X  plain text listed in the index but absent from the page (index noise)

Location entries carry a place key into PLACES.
"""

# (edition, volume, page) -> list of paragraphs
PAGES = {}

PAGES[("first", "a", "0001")] = [
    ("B", "Abel,", "Niels Henrik, norsk matematiker, f. 1802 på Findö, d. 1829 på Froland. Han visade att den allmänna eqvationen af femte graden icke kan lösas algebraiskt."),
    ("B", "Abisko,", "fjällstation i Torne lappmark, Norrbottens län, vid sydsidan af Torneträsk.", "abisko"),
    ("B", "Abo.", "Se Åbo."),
    ("B", "Alingsås,", "stad i Elfsborgs län, vid Säfveåns utlopp i sjön Mjörn. 3,321 innev. (1880). Staden anlades 1619 och fick stadsrättigheter af Gustaf II Adolf.", "alingsas"),
    ("T", "Staden har bomullsspinneri, tobaksfabrik och ett lärdomsgymnasium. Jonas Alströmer grundade här 1724 en klädesfabrik."),
    ("B", "Alkemi,", "den medeltida konsten att förvandla oädla metaller till guld, föregångare till den vetenskapliga kemien."),
    ("B", "Alnö,", "socken i Vesternorrlands län, Medelpads södra fögderi, på en ö i Bottniska viken. Areal 7,285 har. 4,127 innev. (1885).", "alno"),
]
PAGES[("first", "a", "0002")] = [
    ("T", "Ön skiljes från fastlandet genom Alnösundet; här finnas betydande sågverk."),
    ("B", "Amsterdam,", "hufvudstad i konungariket Nederländerna, vid Y och Amstel. 361,000 innev. (1880). Staden är byggd på pålar och genomskuren af kanaler.", "amsterdam"),
    ("T", "Börsen och Rijksmuseum äro stadens märkligaste byggnader."),
    ("B", "Antwerpen,", "stad i Belgien, vid Schelde. 169,000 innev. (1880). En af Europas förnämsta handelshamnar.", "antwerpen"),
    ("B", "Arboga,", "stad i Vestmanlands län, vid Arbogaån. 4,950 innev. (1880). Här hölls 1435 det första riksmötet.", "arboga"),
    ("T", "Staden har en vacker kyrka från 1300-talet."),
    ("B", "Archangelsk,", "guvernement och stad i norra Ryssland, vid Dvinas mynning i Hvita hafvet. 20,000 innev.", "archangelsk"),
    ("B", "Arendal,", "stad i Norge, Nedenes amt, vid Skagerack. 4,500 innev. Betydande sjöfart och trävaruhandel.", "arendal"),
    ("B", "Armatur,", "benämning på de delar af en elektrisk maskin eller magnet, som leda kraftlinierna."),
    ("B", "Askersund,", "stad i Örebro län, vid norra ändan af Vettern. 1,900 innev. (1880). Staden brann 1776.", "askersund"),
    ("B", "Athen,", "Greklands hufvudstad, vid Saroniska viken, nära Piræus. 63,000 innev. (1879). Akropolis med Parthenon reser sig midt i staden.", "athen"),
    ("T", "Universitetet grundades 1837 och har omkring 1,500 studerande."),
]
PAGES[("first", "k", "0001")] = [
    ("O", "och hade sedan dess en betydande handel på Lübeck och Danzig."),
    ("B", "Kairo,", "hufvudstad i Egypten, på östra stranden af Nilen. 374,000 innev. (1882). Staden är säte för khediven.", "kairo"),
    ("T", "Staden har många moskéer och basarer; citadellet reser sig öfver staden."),
    ("B", "Kalkutta,", "hufvudstad i Britiska Indien, vid Hugli. 766,000 innev. (1881).", "kalkutta"),
    ("B", "Kalmar,", "stad i Kalmar län, vid Kalmarsund. 11,000 innev. (1880). Slottet och domkyrkan äro stadens förnämsta byggnader.", "kalmar"),
    ("T", "Under unionstiden var staden en af rikets viktigaste fästningar; här slöts 1397 unionen."),
    ("B", "Kant,", "Immanuel, tysk filosof, f. 1724 i Königsberg, d. 1804. Hans hufvudverk är Kritik der reinen Vernunft."),
    ("B", "Karlstad,", "residensstad i Vermlands län, på Tingvallaön i Klarelfvens mynning i Venern. 7,200 innev. (1880).", "karlstad"),
    ("T", "Domkyrkan uppfördes 1730 efter en stor brand."),
]
PAGES[("first", "k", "0002")] = [
    ("I", "Kemi, vetenskapen om kropparnas sammansättning och de förändringar de undergå genom inverkan på hvarandra.", "Kemi"),
    ("I", "Kristiania, Norges hufvudstad, vid inre ändan af Kristianiafjorden. 122,000 innev. (1885). Akershus fästning beherskar hamnen.", "Kristiania", "kristiania"),
    ("T", "Staden brann 1624 och återuppbyggdes af Kristian IV."),
    ("I", "Kyrkhult, socken i Blekinge län, Medelstads härad. Areal 17,500 har. 3,090 innev. (1885).", "Kyrkhult", "kyrkhult"),
    ("I", "Köping, stad i Vestmanlands län, vid Köpingsåns utlopp i Mälaren. 3,100 innev. (1880).", "Köping", "koping"),
    ("I", "Qvenneherga, socken i Jönköpings län, Vestra härad. Areal 5,300 har. 820 innev. (1885).", "Qvenneberga", "kvenneberga"),
]
PAGES[("first", "o", "0001")] = [
    ("B", "Åbo,", "stad i Finland, residens för Åbo och Björneborgs län, vid Aura å. 24,000 innev. (1880). Till 1819 Finlands hufvudstad.", "abo"),
    ("B", "Åker.", "1. Socken i Jönköpings län, Östbo härad. Areal 15,842 har. 1,798 innev. (1892). Å. bildar med Hagshult ett pastorat i Vexiö stift.", "aker"),
    ("S", "2. Socken i Södermanlands län, Åkers härad. 2,400 innev. (1885)."),
    ("B", "Åmål,", "stad i Elfsborgs län, vid Venern. 2,300 innev. (1880). Staden grundlades 1643.", "amal"),
    ("B", "Ångström,", "Anders Jonas, fysiker, f. 1814 i Lögdö bruk, d. 1874 i Upsala, professor i fysik vid Upsala universitet."),
    ("B", "Åsenhöga,", "socken i Jönköpings län, Mo härad. 12,960 har. 1,257 innev. (1885). Å. bildar med Gnosjö ett pastorat.", "asenhoga"),
]
PAGES[("first", "o", "0002")] = [
    ("T", "Kyrkan är uppförd på 1200-talet och ombyggd 1777."),
    ("B", "Ängelholm,", "stad i Kristianstads län, vid Rönneåns utlopp i Skälderviken. 2,500 innev. (1880).", "angelholm"),
    ("B", "Ägg,", "den hos fåglar och flera andra djur af honan frambragta kroppen, hvarur ungen utvecklas."),
    ("B", "Örebro,", "residensstad i Örebro län, vid Svartåns utlopp i Hjelmaren. 12,000 innev. (1880). Slottet är uppfördt af Karl IX.", "orebro"),
    ("T", "Slottet restaurerades på 1890-talet."),
    ("B", "Östersund,", "residensstad i Jemtlands län, på östra stranden af Storsjön. 2,800 innev. (1880).", "ostersund"),
    ("T", "Staden grundades 1786 af Gustaf III."),
    ("B", "Öved,", "socken i Malmöhus län, Frosta härad. Areal 3,570 har. 780 innev. (1885). Inom socknen ligger Öfvedskloster.", "oved"),
    ("T", "Godset tillhörde fordom Premonstratensorden."),
    ("B", "Örnsköldsvik,", "köping i Vesternorrlands län, vid Bottniska viken. 1,400 innev. (1880).", "ornskoldsvik"),
]

PAGES[("second", "a", "0001")] = [
    ("B", "Abel,", "Niels Henrik, norsk matematiker, f. 1802, d. 1829. Han bevisade att den allmänna ekvationen av femte graden icke kan lösas algebraiskt."),
    ("B", "Abisko,", "turiststation i Torne lappmark, Norrbottens län, vid södra stranden af Torneträsk och Ofotenbanan.", "abisko"),
    ("B", "Abo.", "Se Åbo."),
    ("B", "Alaska,", "territorium i nordvästra Nordamerika, tillhörande Förenta staterna sedan 1867. 64,000 inv. (1910). Guldfälten vid Klondike och Nome.", "alaska"),
    ("B", "Alingsås,", "stad i Älvsborgs län, vid Säveåns utlopp i sjön Mjörn. 5,200 inv. (1910). Staden anlades 1619 och fick stadsrättigheter af Gustaf II Adolf.", "alingsas"),
    ("T", "Staden har bomullsspinneri och tobaksfabrik. Jonas Alströmer grundade här 1724 en klädesfabrik."),
    ("B", "Alkemi,", "den medeltida konsten att förvandla oädla metaller till guld, den vetenskapliga kemiens föregångare."),
]
PAGES[("second", "a", "0002")] = [
    ("B", "Alnö,", "socken i Västernorrlands län, Medelpads södra fögderi, på en ö i Bottniska viken. Areal 7,285 har. 7,900 inv. (1910).", "alno"),
    ("B", "Amsterdam,", "huvudstad i konungariket Nederländerna, vid Y och Amstel. 574,000 inv. (1910). Staden är byggd på pålar och genomskuren af kanaler.", "amsterdam"),
    ("T", "Börsen och Rijksmuseum äro stadens märkligaste byggnader."),
    ("B", "Antwerpen,", "stad i Belgien, vid Schelde. 301,000 inv. (1910). En af Europas förnämsta handelshamnar.", "antwerpen"),
    ("B", "Arboga,", "stad i Västmanlands län, vid Arbogaån. 5,600 inv. (1910). Här hölls 1435 det första riksmötet.", "arboga"),
    ("T", "Staden har en vacker kyrka från 1300-talet."),
    ("B", "Archangelsk,", "guvernement och stad i norra Ryssland, vid Dvinas mynning i Vita havet. 38,000 inv.", "archangelsk"),
    ("B", "Arendal,", "stad i Norge, Nedenes amt, vid Skagerack. 10,900 inv. (1910). Betydande sjöfart och trävaruhandel.", "arendal"),
    ("B", "Armatur,", "benämning på de delar av en elektrisk maskin eller magnet, som leda kraftlinjerna."),
    ("B", "Askersund,", "stad i Örebro län, vid norra ändan af Vättern. 2,000 inv. (1910). Staden brann 1776.", "askersund"),
    ("B", "Athen,", "Greklands huvudstad, vid Saroniska viken, nära Piræus. 167,000 inv. (1907). Akropolis med Parthenon reser sig mitt i staden.", "athen"),
    ("T", "Universitetet grundades 1837 och har omkring 2,500 studerande."),
]
PAGES[("second", "k", "0001")] = [
    ("B", "Kairo,", "huvudstad i Egypten, på östra stranden af Nilen. 654,000 inv. (1907). Staden är säte för khediven.", "kairo"),
    ("T", "Staden har många moskéer och basarer; citadellet reser sig över staden."),
    ("B", "Kalkutta,", "huvudstad i Brittiska Indien, vid Hugli. 1,222,000 inv. (1911).", "kalkutta"),
    ("B", "Kalmar,", "stad i Kalmar län, vid Kalmarsund. 13,500 inv. (1910). Slottet och domkyrkan äro stadens förnämsta byggnader.", "kalmar"),
    ("T", "Under unionstiden var staden en af rikets viktigaste fästningar; här slöts 1397 unionen."),
    ("C", "Kanada, brittiskt dominion i norra Nordamerika, omfattande nio provinser. 7,200,000 inv. (1911). Huvudstad är Ottawa.", "kanada"),
    ("B", "Kant,", "Immanuel, tysk filosof, f. 1724 i Königsberg, d. 1804. Hans huvudverk är Kritik der reinen Vernunft."),
    ("C", "Kapstaden, stad i Sydafrikanska unionen, vid Taffelbukten. 162,000 inv. (1911). Parlamentets säte.", "kapstaden"),
    ("B", "Karlstad,", "residensstad i Värmlands län, på Tingvallaön i Klarälvens mynning i Vänern. 20,000 inv. (1910).", "karlstad"),
    ("T", "Domkyrkan uppfördes 1730 efter en stor brand."),
]
PAGES[("second", "k", "0002")] = [
    ("I", "Kemi, vetenskapen om kropparnas sammansättning och de förändringar de undergå genom inverkan på varandra.", "Kemi"),
    ("C", "Kentucky, en af Förenta staternas mellersta stater, söder om Ohiofloden. 2,290,000 inv. (1910). Huvudstad Frankfort.", "kentucky"),
    ("C", "Kioto, stad i Japan, på ön Hondo, förut kejsarens residens. 442,000 inv. (1908).", "kioto"),
    ("C", "Kiruna, municipalsamhälle i Norrbottens län, Jukkasjärvi socken, vid malmbergen Kiirunavaara och Luossavaara. 8,500 inv. (1910).", "kiruna"),
    ("T", "Där brytes järnmalm, som utskeppas över Narvik."),
    ("I", "Kristiania, Norges huvudstad, vid inre ändan af Kristianiafjorden. 241,000 inv. (1910). Akershus fästning behärskar hamnen.", "Kristiania", "kristiania"),
    ("I", "Kvenneberga, socken i Jönköpings län, Västra härad. Areal 5,300 har. 700 inv. (1910).", "Kvenneberga", "kvenneberga"),
    ("I", "Kyrkhult, socken i Blekinge län, Medelstads härad. Areal 17,500 har. 3,300 inv. (1910).", "Kyrkhult", "kyrkhult"),
    ("I", "Köping, stad i Västmanlands län, vid Köpingsåns utlopp i Mälaren. 6,500 inv. (1910).", "Köping", "koping"),
    ("B", "Qvenneberga.", "Se Kvenneberga."),
]
PAGES[("second", "o", "0001")] = [
    ("I", "Åbo, stad i Finland, residens för Åbo och Björneborgs län, vid Aura å. 50,000 inv. (1910). Till 1819 Finlands huvudstad.", "Åbo", "abo"),
    ("I", "Åker. 1. Socken i Jönköpings län, Östbo härad. Areal 15,842 har. 1,600 inv. (1910). Å. bildar med Hagshult ett pastorat i Växjö stift.", "Åker", "aker"),
    ("S", "2. Socken i Södermanlands län, Åkers härad. 2,300 inv. (1910)."),
    ("I", "Ålesund, stad i Norge, Romsdals amt, på tre öar. 15,000 inv. (1910). Staden brann 1904 och återuppbyggdes i sten.", "Ålesund", "alesund"),
    ("I", "Åmål, stad i Älvsborgs län, vid Vänern. 4,000 inv. (1910). Staden grundlades 1643.", "Åmål", "amal"),
    ("I", "Ångström, Anders Jonas, fysiker, f. 1814, d. 1874 i Uppsala, professor i fysik vid Uppsala universitet.", "Ångström"),
    ("I", "Åsenhöga, socken i Jönköpings län, Mo härad. 12,960 har. 1,257 inv. (1921). Å. bildar med Gnosjö ett pastorat.", "Åsenhöga", "asenhoga"),
    ("X", "Åtvidaberg"),
]
PAGES[("second", "o", "0002")] = [
    ("T", "Kyrkan är uppförd på 1200-talet och ombyggd 1777."),
    ("B", "Ängelholm,", "stad i Kristianstads län, vid Rönneåns utlopp i Skälderviken. 5,600 inv. (1910).", "angelholm"),
    ("B", "Ägg,", "den hos fåglar och flera andra djur av honan frambragta kroppen, varur ungen utvecklas."),
    ("B", "Örebro,", "residensstad i Örebro län, vid Svartåns utlopp i Hjälmaren. 49,000 inv. (1910). Slottet är uppfört af Karl IX.", "orebro"),
    ("T", "Slottet restaurerades på 1890-talet."),
    ("B", "Östersund,", "residensstad i Jämtlands län, på östra stranden af Storsjön. 14,000 inv. (1910).", "ostersund"),
    ("T", "Staden grundades 1786 av Gustav III."),
    ("B", "Öved,", "socken i Malmöhus län, Frosta härad. Areal 3,570 har. 700 inv. (1910). Inom socknen ligger Övedskloster.", "oved"),
    ("T", "Godset tillhörde fordom Premonstratensorden."),
    ("B", "Örnsköldsvik,", "stad i Västernorrlands län, vid Bottniska viken. 3,000 inv. (1910).", "ornskoldsvik"),
]

# Headword initials for volumes whose bold headwords do not show them all.
VOLUME_LETTERS = {
    "first/k": "KLMNOPQ",
    "second/k": "KLMNOPQ",
    "second/o": "ÅÄÖ",
}

# Places: key -> knowledge-graph item of the true referent.
# qid, label, svwiki title (or None), extract (or None), wikidata
# description, (lat, lon), country code.
PLACES = {
    "abisko": ("Q9000001", "Abisko", "Abisko", "Abisko är en ort i Kiruna kommun i Norrbottens län, Torne lappmark, vid södra stranden av Torneträsk. Abisko turiststation och Ofotenbanan.", "ort i Kiruna kommun", (68.3495, 18.8312), "SE"),
    "alingsas": ("Q9000002", "Alingsås", "Alingsås", "Alingsås är en tätort och centralort i Alingsås kommun i Västra Götalands län. Staden ligger vid Säveåns utlopp i sjön Mjörn och fick stadsrättigheter 1619 av Gustav II Adolf.", "tätort i Alingsås kommun", (57.9300, 12.5336), "SE"),
    "alno": ("Q9000003", "Alnö socken", "Alnö socken", "Alnö socken ligger i Medelpad, ingår sedan 1971 i Sundsvalls kommun i Västernorrlands län och är en ö i Bottniska viken. Areal 7,285 hektar.", "socken i Medelpad", (62.4333, 17.4333), "SE"),
    "amsterdam": ("Q9000004", "Amsterdam", "Amsterdam", "Amsterdam är huvudstad i konungariket Nederländerna, vid Amstel och IJ. Staden är byggd på pålar och genomskuren av kanaler.", "huvudstad i Nederländerna", (52.3728, 4.8936), "NL"),
    "antwerpen": ("Q9000005", "Antwerpen", "Antwerpen", "Antwerpen är en stad i Belgien vid floden Schelde, en av Europas förnämsta handelshamnar.", "stad i Belgien", (51.2194, 4.4025), "BE"),
    "arboga": ("Q9000006", "Arboga", "Arboga", "Arboga är en tätort och stad i Västmanlands län vid Arbogaån. Här hölls 1435 det första riksmötet i Arboga.", "tätort i Arboga kommun", (59.3939, 15.8386), "SE"),
    "archangelsk": ("Q9000007", "Archangelsk", "Archangelsk", "Archangelsk är en stad och guvernement i norra Ryssland, vid Dvinas mynning i Vita havet.", "stad i Ryssland", None, "RU"),
    "arendal": ("Q9000008", "Arendal", "Arendal", "Arendal är en stad i Norge, Agder fylke, vid Skagerrak med betydande sjöfart och trävaruhandel.", "stad i Norge", (58.4617, 8.7722), "NO"),
    "askersund": ("Q9000009", "Askersund", "Askersund", "Askersund är en tätort och stad i Örebro län, vid norra ändan av Vättern. Staden brann 1776.", "tätort i Askersunds kommun", (58.8797, 14.9028), "SE"),
    "athen": ("Q9000010", "Aten", "Aten", "Aten är Greklands huvudstad, vid Saroniska viken nära Pireus. Akropolis med Parthenon reser sig i staden.", "huvudstad i Grekland", (37.9838, 23.7275), "GR"),
    "kairo": ("Q9000011", "Kairo", "Kairo", "Kairo är huvudstad i Egypten, på östra stranden av Nilen. Staden var säte för khediven.", "huvudstad i Egypten", (30.0444, 31.2357), "EG"),
    "kalkutta": ("Q9000012", "Kolkata", "Kolkata", "Kolkata, tidigare Calcutta, är en storstad och delstatshuvudstad i Västbengalen i östra Indien med omkring fjorton miljoner invånare i storstadsområdet.", "storstad i Indien", (22.5726, 88.3639), "IN"),
    "kalmar": ("Q9000013", "Kalmar", "Kalmar", "Kalmar är en tätort och stad i Kalmar län, vid Kalmarsund. Kalmar slott och domkyrkan är stadens förnämsta byggnader.", "tätort i Kalmar kommun", (56.6634, 16.3568), "SE"),
    "kanada": ("Q9000014", "Kanada", "Kanada", "Kanada är ett land i norra Nordamerika, ett tidigare brittiskt dominion med tio provinser. Huvudstad är Ottawa.", "land i Nordamerika", (56.0, -106.0), "CA"),
    "kapstaden": ("Q9000015", "Kapstaden", "Kapstaden", "Kapstaden är en stad i Sydafrika, vid Taffelbukten, och säte för landets parlament.", "stad i Sydafrika", (-33.9249, 18.4241), "ZA"),
    "karlstad": ("Q9000016", "Karlstad", "Karlstad", "Karlstad är en tätort och residensstad i Värmlands län, på Tingvallaön i Klarälvens mynning i Vänern.", "tätort i Karlstads kommun", (59.3793, 13.5036), "SE"),
    "kentucky": ("Q9000017", "Kentucky", "Kentucky", "Kentucky är en av Förenta staternas delstater, söder om Ohiofloden. Huvudstad är Frankfort.", "delstat i USA", (37.5, -85.0), "US"),
    "kioto": ("Q9000018", "Kyoto", "Kyoto", "Kyoto är en stad i Japan, på ön Honshu, tidigare kejsarens residens.", "stad i Japan", (35.0116, 135.7681), "JP"),
    "kiruna": ("Q9000019", "Kiruna", "Kiruna", "Kiruna är en tätort i Norrbottens län, Jukkasjärvi socken, vid malmbergen Kiirunavaara och Luossavaara.", "tätort i Kiruna kommun", (67.8558, 20.2253), "SE"),
    "kristiania": ("Q9000020", "Oslo", "Oslo", "Oslo, tidigare Kristiania, är Norges huvudstad vid inre ändan av Oslofjorden. Akershus fästning behärskar hamnen.", "huvudstad i Norge", (59.9139, 10.7522), "NO"),
    "kvenneberga": ("Q9000021", "Kvenneberga", "Kvenneberga socken", "Kvenneberga, socken i Jönköpings län, i Västra härad. Areal 5 300 hektar.", "by i Jönköpings län, tidigare socken i Västra härad", (57.2167, 14.5333), "SE"),
    "kyrkhult": ("Q9000022", "Kyrkhults socken", "Kyrkhults socken", "Kyrkhults socken ligger i Blekinge, ingår sedan 1971 i Olofströms kommun i Blekinge län, Medelstads härad. Areal 17,500 hektar.", "socken i Blekinge", (56.3667, 14.6000), "SE"),
    "koping": ("Q9000023", "Köping", "Köping", "Köping är en tätort och stad i Västmanlands län, vid Köpingsåns utlopp i Mälaren.", "tätort i Köpings kommun", (59.5142, 15.9926), "SE"),
    "abo": ("Q9000024", "Åbo", "Åbo", "Åbo är en stad i Finland, vid Aura å. Till 1812 var Åbo Finlands huvudstad och residens för Åbo och Björneborgs län.", "stad i Finland", (60.4518, 22.2666), "FI"),
    "aker": ("Q9000025", "Åkers socken, Småland", "Åkers socken, Småland", "Åkers socken ligger i Småland, ingår sedan 1971 i Vaggeryds kommun i Jönköpings län, Östbo härad. Socken bildar med Hagshult ett pastorat i Växjö stift.", "socken i Småland", (57.4333, 14.1000), "SE"),
    "alesund": ("Q9000026", "Ålesund", "Ålesund", "Ålesund är en stad i Norge, Møre og Romsdal fylke, på flera öar. Staden brann 1904 och återuppbyggdes i jugendstil.", "stad i Norge", (62.4722, 6.1549), "NO"),
    "amal": ("Q9000027", "Åmål", "Åmål", "Åmål är en tätort och stad i Västra Götalands län vid Vänern. Staden grundlades 1643.", "tätort i Åmåls kommun", (59.0510, 12.7040), "SE"),
    "asenhoga": ("Q9000028", "Åsenhöga socken", "Åsenhöga socken", "Åsenhöga socken ligger i Småland, ingår sedan 1971 i Gnosjö kommun i Jönköpings län, Mo härad.", "socken i Småland", (57.3500, 13.6833), "SE"),
    "angelholm": ("Q9000029", "Ängelholm", "Ängelholm", "Ängelholm är en tätort och stad i Skåne län, vid Rönneåns utlopp i Skälderviken.", "tätort i Ängelholms kommun", (56.2428, 12.8622), "SE"),
    "orebro": ("Q9000030", "Örebro", "Örebro", "Örebro är en tätort och residensstad i Örebro län, vid Svartåns utlopp i Hjälmaren. Slottet är uppfört av Karl IX.", "tätort i Örebro kommun", (59.2741, 15.2066), "SE"),
    "ostersund": ("Q9000031", "Östersund", "Östersund", "Östersund är en tätort och residensstad i Jämtlands län, på östra stranden av Storsjön.", "tätort i Östersunds kommun", (63.1792, 14.6357), "SE"),
    "oved": ("Q9000032", "Öveds socken", None, None, "socken i Skåne", (55.7000, 13.6167), "SE"),
    "ornskoldsvik": ("Q9000033", "Örnsköldsvik", "Örnsköldsvik", "Örnsköldsvik är en tätort och stad i Västernorrlands län, vid Bottniska viken.", "tätort i Örnsköldsviks kommun", (63.2909, 18.7153), "SE"),
    "alaska": ("Q9000034", "Alaska", "Alaska", "Alaska är en delstat i nordvästra Nordamerika, tillhörande Förenta staterna sedan 1867. Guldfälten vid Klondike och Nome.", "delstat i USA", (64.0, -150.0), "US"),
}

# Extra search hits that are not the referent, by searched headword.
# (qid, label, title or None, extract or None, description, coords or None)
DISTRACTORS = {
    "Öved": [
        ("Q9100001", "Övedsklosters slott", "Övedsklosters slott", "Övedsklosters slott är ett slott i Öveds socken i Sjöbo kommun, förr Malmöhus län, Frosta härad. Godset tillhörde fordom Premonstratensorden, som hade ett kloster inom socknen.", "slott i Skåne", (55.6960, 13.6440)),
    ],
    "Åker": [
        ("Q9100002", "Åkers socken, Södermanland", "Åkers socken, Södermanland", "Åkers socken ligger i Södermanland, ingår i Strängnäs kommun, Åkers härad.", "socken i Södermanland", (59.2500, 17.0833)),
        ("Q9100003", "Åker", None, None, "mark som används för odling", None),
    ],
    "Kalmar": [
        ("Q9100004", "Kalmar slott", "Kalmar slott", "Kalmar slott är ett slott i Kalmar, Sverige.", "slott i Kalmar", (56.6589, 16.3547)),
        ("Q9100005", "Kalmar FF", "Kalmar FF", "Kalmar FF är en fotbollsklubb.", "fotbollsklubb", None),
    ],
    "Kant": [
        ("Q9100006", "Immanuel Kant", "Immanuel Kant", "Immanuel Kant var en tysk filosof, född 1724 i Königsberg, död 1804. Hans huvudverk är Kritik der reinen Vernunft.", "tysk filosof", None),
    ],
    "Abel": [
        ("Q9100007", "Niels Henrik Abel", "Niels Henrik Abel", "Niels Henrik Abel var en norsk matematiker, född 1802, död 1829.", "norsk matematiker", None),
    ],
    "Amsterdam": [
        ("Q9100008", "Amsterdam (film)", None, None, "film från 2022", None),
    ],
    "Archangelsk": [
        ("Q9100009", "Archangelsk oblast", "Archangelsk oblast", "Archangelsk oblast är ett oblast i nordvästra Ryssland.", "oblast i Ryssland", (64.0, 44.0)),
    ],
    "Kemi": [
        ("Q9100010", "kemi", "Kemi", "Kemi är vetenskapen om ämnens sammansättning, egenskaper och omvandlingar.", "naturvetenskap", None),
        ("Q9100011", "Kemi", "Kemi (stad)", "Kemi är en stad i Lappland i Finland vid Bottenviken.", "stad i Finland", (65.7364, 24.5637)),
    ],
    "Ägg": [
        ("Q9100012", "ägg", "Ägg", "Ägg är den kropp som fåglar och andra djur lägger och varur ungen utvecklas.", "biologisk struktur", None),
    ],
    "Alkemi": [
        ("Q9100013", "alkemi", "Alkemi", "Alkemi var en medeltida föregångare till kemin.", "protovetenskap", None),
    ],
    "Ångström": [
        ("Q9100014", "Anders Jonas Ångström", "Anders Jonas Ångström", "Anders Jonas Ångström var en svensk fysiker, professor i fysik vid Uppsala universitet.", "svensk fysiker", None),
    ],
    "Armatur": [
        ("Q9100015", "armatur", None, None, "del av elektrisk maskin", None),
    ],
}

# Search results that omit the referent: the old spelling finds nothing.
EMPTY_SEARCHES = {"Qvenneberga"}

# Search order: distractor positions relative to the referent.
REFERENT_FIRST = {"Öved": False, "Kant": True, "Abel": True}
