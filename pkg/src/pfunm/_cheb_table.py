"""Embedded rational-approximation table for exp (generated file).

Generated by tools/gen_chebyshev_table.py; do not edit by hand.

For each even degree N the stored data defines
    r(x) = c0 + sum_j coeffs[j] / (poles[j] - x)
with r(x) ~ e^x on (-inf, 0], uniform error ~ 10^-N. Values are decimal
strings with 25 significant digits; poles are sorted by imaginary part and
occur in conjugate pairs with conjugate coefficients.
"""

TABLE = {
    2: {
        "c0": "0.007169861931649704816578092",
        "poles": [
            ("0.5850515606551311255016871", "-1.185847251723677111052088"),
            ("0.5850515606551311255016871", "1.185847251723677111052088"),
        ],
        "coeffs": [
            ("-0.1691526336115416226037515", "-0.8098011115445216890542558"),
            ("-0.1691526336115416226037515", "0.8098011115445216890542558"),
        ],
    },
    4: {
        "c0": "0.00008646737872926427683854825",
        "poles": [
            ("-0.3678383143998626263950157", "-3.658133272063283010198358"),
            ("1.548400570539391557340436", "-1.191825853927619744444152"),
            ("1.548400570539391557340436", "1.191825853927619744444152"),
            ("-0.3678383143998626263950157", "3.658133272063283010198358"),
        ],
        "coeffs": [
            ("-0.07339241923416416286667598", "0.4500049158537890272445696"),
            ("0.06168352255495941599180481", "-1.905059455979849165520778"),
            ("0.06168352255495941599180481", "1.905059455979849165520778"),
            ("-0.07339241923416416286667598", "-0.4500049158537890272445696"),
        ],
    },
    6: {
        "c0": "0.000001008475864446715935280838",
        "poles": [
            ("-1.781988275920799289936403", "-6.1965124673475685946391"),
            ("1.158552571719316685586091", "-3.614772600820119139403634"),
            ("2.400602938933007629562738", "-1.193129308402291927575939"),
            ("2.400602938933007629562738", "1.193129308402291927575939"),
            ("1.158552571719316685586091", "3.614772600820119139403634"),
            ("-1.781988275920799289936403", "6.1965124673475685946391"),
        ],
        "coeffs": [
            ("0.08358161715624952965816126", "-0.106429260747950487824157"),
            ("-0.663006870527614033063979", "1.451412919902914512472833"),
            ("0.579013004030160513861133", "-4.286888564581602679099187"),
            ("0.579013004030160513861133", "4.286888564581602679099187"),
            ("-0.663006870527614033063979", "-1.451412919902914512472833"),
            ("0.08358161715624952965816126", "0.106429260747950487824157"),
        ],
    },
    8: {
        "c0": "1.172260685246054078146084e-8",
        "poles": [
            ("-3.408539501577153783334444", "-8.773034564444612968250278"),
            ("0.2694909872462650466025774", "-6.08203259271013957341499"),
            ("2.29224914770949918135368", "-3.600771496074937078149456"),
            ("3.220945244950567922584274", "-1.193619605417287727029119"),
            ("3.220945244950567922584274", "1.193619605417287727029119"),
            ("2.29224914770949918135368", "3.600771496074937078149456"),
            ("0.2694909872462650466025774", "6.08203259271013957341499"),
            ("-3.408539501577153783334444", "8.773034564444612968250278"),
        ],
        "coeffs": [
            ("-0.02812975715819869364092614", "0.01157738456838427772738117"),
            ("0.632588053655964931829181", "-0.4439231026530502004533491"),
            ("-2.436240732660578659269178", "3.716755640458719080847528"),
            ("1.831771710441704111619049", "-9.525608128944675830366079"),
            ("1.831771710441704111619049", "9.525608128944675830366079"),
            ("-2.436240732660578659269178", "-3.716755640458719080847528"),
            ("0.632588053655964931829181", "0.4439231026530502004533491"),
            ("-0.02812975715819869364092614", "-0.01157738456838427772738117"),
        ],
    },
    10: {
        "c0": "1.361121187473438122617403e-10",
        "poles": [
            ("-5.161191271764947383666729", "-11.37515625222477895212477"),
            ("-0.8944047014173540703336834", "-8.582756898773036317585079"),
            ("1.715406015926698003925442", "-6.038934925576109629793754"),
            ("3.283752883370418276521621", "-3.594386772405082890959949"),
            ("4.027732467649548433147364", "-1.193856066470872879210377"),
            ("4.027732467649548433147364", "1.193856066470872879210377"),
            ("3.283752883370418276521621", "3.594386772405082890959949"),
            ("1.715406015926698003925442", "6.038934925576109629793754"),
            ("-0.8944047014173540703336834", "8.582756898773036317585079"),
            ("-5.161191271764947383666729", "11.37515625222477895212477"),
        ],
        "coeffs": [
            ("0.005784903859715048602387562", "0.0006858507075779822022545656"),
            ("-0.2725869803482112306808668", "0.01421172707150338004847881"),
            ("2.565584955172401362846467", "-1.216385706516015773711798"),
            ("-7.117165104820129763905618", "8.819533159469231536634072"),
            ("4.818381991284941319018993", "-21.05459724147686252260737"),
            ("4.818381991284941319018993", "21.05459724147686252260737"),
            ("-7.117165104820129763905618", "-8.819533159469231536634072"),
            ("2.565584955172401362846467", "1.216385706516015773711798"),
            ("-0.2725869803482112306808668", "-0.01421172707150338004847881"),
            ("0.005784903859715048602387562", "-0.0006858507075779822022545656"),
        ],
    },
    12: {
        "c0": "1.579456741020678375623348e-12",
        "poles": [
            ("-6.998687908595892971316399", "-13.99591662497926247478207"),
            ("-2.235968246124955850576488", "-11.10929623270746654624101"),
            ("0.8517070967201086504843834", "-8.503832825637502913265307"),
            ("2.917868545083253643037811", "-6.017345924094155250701139"),
            ("4.206124204321871123392128", "-3.590920758885601892054222"),
            ("4.827493452164460342374878", "-1.193987991223399170927363"),
            ("4.827493452164460342374878", "1.193987991223399170927363"),
            ("4.206124204321871123392128", "3.590920758885601892054222"),
            ("2.917868545083253643037811", "6.017345924094155250701139"),
            ("0.8517070967201086504843834", "8.503832825637502913265307"),
            ("-2.235968246124955850576488", "11.10929623270746654624101"),
            ("-6.998687908595892971316399", "13.99591662497926247478207"),
        ],
        "coeffs": [
            ("-0.0008184334992732075124686591", "-0.0005813535824245203427220006"),
            ("0.06857149425031032197603043", "0.03841908288659377473388103"),
            ("-1.319411534077838114706538", "-0.1835235828709921615887444"),
            ("8.238255934264527039079912", "-2.796191262327413898671794"),
            ("-18.78597742158064993896536", "20.23728512615495430129508"),
            ("11.79937995604385898780808", "-46.41163533369930593129624"),
            ("11.79937995604385898780808", "46.41163533369930593129624"),
            ("-18.78597742158064993896536", "-20.23728512615495430129508"),
            ("8.238255934264527039079912", "2.796191262327413898671794"),
            ("-1.319411534077838114706538", "0.1835235828709921615887444"),
            ("0.06857149425031032197603043", "-0.03841908288659377473388103"),
            ("-0.0008184334992732075124686591", "0.0005813535824245203427220006"),
        ],
    },
    14: {
        "c0": "1.832174392655344167384035e-14",
        "poles": [
            ("-8.897773186468662394865169", "-16.63098261990231640641585"),
            ("-3.703275049423281199020026", "-13.6563718714833972508968"),
            ("-0.2087586382499971444700999", "-10.99126056190134420982782"),
            ("2.269783829231224755682653", "-8.461737973040277006806439"),
            ("3.99336971057866739845113", "-6.004831642235073268633002"),
            ("5.089345060580715512366764", "-3.588824029027026812189988"),
            ("5.623142572746064448358848", "-1.194069046343973545228743"),
            ("5.623142572746064448358848", "1.194069046343973545228743"),
            ("5.089345060580715512366764", "3.588824029027026812189988"),
            ("3.99336971057866739845113", "6.004831642235073268633002"),
            ("2.269783829231224755682653", "8.461737973040277006806439"),
            ("-0.2087586382499971444700999", "10.99126056190134420982782"),
            ("-3.703275049423281199020026", "13.6563718714833972508968"),
            ("-8.897773186468662394865169", "16.63098261990231640641585"),
        ],
        "coeffs": [
            ("0.0000715428806359364260782838", "0.0001436104334954309038439751"),
            ("-0.009439025310739697732196755", "-0.01718479195848480403055494"),
            ("0.3763600387823442576292534", "0.3351834702945186544819192"),
            ("-4.807112098833120119764278", "-1.320979383742796365198653"),
            ("23.49823209108493416430753", "-5.80835912971550065938684"),
            ("-46.93327448883503713978844", "45.64364976883289707954676"),
            ("27.87516194014769772793189", "-102.1473399905741302360196"),
            ("27.87516194014769772793189", "102.1473399905741302360196"),
            ("-46.93327448883503713978844", "-45.64364976883289707954676"),
            ("23.49823209108493416430753", "5.80835912971550065938684"),
            ("-4.807112098833120119764278", "1.320979383742796365198653"),
            ("0.3763600387823442576292534", "-0.3351834702945186544819192"),
            ("-0.009439025310739697732196755", "0.01718479195848480403055494"),
            ("0.0000715428806359364260782838", "-0.0001436104334954309038439751"),
        ],
    },
    16: {
        "c0": "2.124853708195789332703348e-16",
        "poles": [
            ("-10.84391707869698155355697", "-19.27744616718165840646807"),
            ("-5.264971343442642124588959", "-16.22022147316793079450812"),
            ("-1.413928462488882432028325", "-13.497725698892747697347"),
            ("1.419375897185669143557911", "-10.92536348449672418947766"),
            ("3.50910360841492081003674", "-8.436198985884376208893829"),
            ("4.993174737717998884805455", "-5.996881713603942932736052"),
            ("5.948152268951179781272305", "-3.587457362018322738166727"),
            ("6.416177699099436405375618", "-1.194122393370138807379329"),
            ("6.416177699099436405375618", "1.194122393370138807379329"),
            ("5.948152268951179781272305", "3.587457362018322738166727"),
            ("4.993174737717998884805455", "5.996881713603942932736052"),
            ("3.50910360841492081003674", "8.436198985884376208893829"),
            ("1.419375897185669143557911", "10.92536348449672418947766"),
            ("-1.413928462488882432028325", "13.497725698892747697347"),
            ("-5.264971343442642124588959", "16.22022147316793079450812"),
            ("-10.84391707869698155355697", "19.27744616718165840646807"),
        ],
        "coeffs": [
            ("0.0000005090152186521196903097789", "-0.00002422001765285244706036792"),
            ("-0.0002115174218246476673801748", "0.004389296964738088795737322"),
            ("-0.04102313683541049534265304", "-0.1574346617345551916463782"),
            ("1.479300711355807144988463", "1.76865883237829734644248"),
            ("-15.05958527002351458744272", "-5.751405277642183895034424"),
            ("62.51839246320807204987079", "-11.19039109428329548655"),
            ("-113.3977517848395417791453", "101.9472170421588472200111"),
            ("64.50087802553977029180754", "-224.5944076265214919486192"),
            ("64.50087802553977029180754", "224.5944076265214919486192"),
            ("-113.3977517848395417791453", "-101.9472170421588472200111"),
            ("62.51839246320807204987079", "11.19039109428329548655"),
            ("-15.05958527002351458744272", "5.751405277642183895034424"),
            ("1.479300711355807144988463", "-1.76865883237829734644248"),
            ("-0.04102313683541049534265304", "0.1574346617345551916463782"),
            ("-0.0002115174218246476673801748", "-0.004389296964738088795737322"),
            ("0.0000005090152186521196903097789", "0.00002422001765285244706036792"),
        ],
    },
}
